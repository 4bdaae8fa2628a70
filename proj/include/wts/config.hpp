#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wts/symbol.hpp"

namespace wts {

struct AnalysisConfig {
    GridSpec grid{0.25, 256};
    std::vector<SymbolSpec> symbols;
    std::vector<double> t;
    std::vector<double> scales;  // defaults to all ones
    std::vector<std::string> analyses;

    int max_order = 8;
    int lattice_n = 4;
    int kmax = 32;
    double tol = 1e-10;
    int psd_samples = 8;
    std::vector<double> theta_list;  // default: five fixed angles

    std::string out_format = "json";
    std::string out_path;
};

// Parses and validates a JSON config. Malformed JSON raises ParseError;
// semantic problems (non-grid translations, nonpositive h, unknown symbol
// kind) raise ValidationError.
AnalysisConfig parse_config(const std::string& text);
AnalysisConfig load_config_file(const std::string& path);

nlohmann::ordered_json config_to_json(const AnalysisConfig& config);
nlohmann::ordered_json symbol_to_json(const SymbolSpec& symbol);

}  // namespace wts
