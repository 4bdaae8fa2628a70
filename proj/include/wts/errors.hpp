#pragma once

#include <stdexcept>
#include <string>

namespace wts {

// Error taxonomy. Analysis errors derive from AnalysisError and carry a kind
// tag so the CLI can serialize them into the report (exit code 2);
// verification failures are reported through verdict structs, not exceptions.

struct AnalysisError : std::runtime_error {
    std::string kind;
    AnalysisError(std::string kind_tag, const std::string& message)
        : std::runtime_error(message), kind(std::move(kind_tag)) {}
};

#define WTS_DEFINE_ERROR(Name)                                              \
    struct Name : AnalysisError {                                           \
        explicit Name(const std::string& message) : AnalysisError(#Name, message) {} \
    }

WTS_DEFINE_ERROR(NonPositiveSymbol);
WTS_DEFINE_ERROR(OutOfDomain);
WTS_DEFINE_ERROR(WindowTooSmall);
WTS_DEFINE_ERROR(NonGridTranslation);
WTS_DEFINE_ERROR(GridMismatch);
WTS_DEFINE_ERROR(NotSingleTerm);
WTS_DEFINE_ERROR(TooLarge);
WTS_DEFINE_ERROR(NotCommuting);
WTS_DEFINE_ERROR(NotLeftInvertible);
WTS_DEFINE_ERROR(NotJointlyLeftInvertible);
WTS_DEFINE_ERROR(TruncationExceedsGrid);
WTS_DEFINE_ERROR(OutsidePolydisc);
WTS_DEFINE_ERROR(DualNotCommuting);
WTS_DEFINE_ERROR(ParseError);
WTS_DEFINE_ERROR(ValidationError);
WTS_DEFINE_ERROR(IoError);

#undef WTS_DEFINE_ERROR

}  // namespace wts
