#pragma once

#include <vector>

#include "wts/grid.hpp"
#include "wts/symbol.hpp"

namespace wts {

// One banded term: (T f)(x_j) = mult[j] * f(x_{j-shift}), zero when j-shift
// falls outside the grid. Canonical multipliers are zeroed wherever the term
// cannot act (j-shift off-grid), so equal actions mean equal stored data.
//
// valid_hi is safe-window bookkeeping: for j <= valid_hi the multiplier equals
// the value the same composition would have on the untruncated half-line; above
// it, right-boundary truncation may have zeroed contributions. Elementary
// weighted translations are exact everywhere (valid_hi = n-1); adjoints and
// compositions shrink the window per the rules in adjoint()/compose().
struct ShiftTerm {
    int shift = 0;
    std::vector<Complex> mult;
    int valid_hi = 0;
};

class OperatorExpr {
  public:
    OperatorExpr() = default;
    explicit OperatorExpr(const GridSpec& g) : grid_(g) {}

    static OperatorExpr identity(const GridSpec& g);
    // Single term; the multiplier is canonicalized (off-domain entries zeroed).
    static OperatorExpr single(const GridSpec& g, int shift, std::vector<Complex> mult,
                               int valid_hi);
    // Multiplication operator by a real/complex grid function (shift 0).
    static OperatorExpr multiplication(const GridSpec& g, std::vector<Complex> mult, int valid_hi);

    const GridSpec& grid() const { return grid_; }
    const std::vector<ShiftTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_single() const { return terms_.size() == 1; }

    // Smallest valid_hi across terms: the operator's multipliers agree with the
    // untruncated half-line composition on grid indices [0, safe_hi].
    int safe_hi() const;

    GridFunction apply(const GridFunction& f) const;
    OperatorExpr compose(const OperatorExpr& rhs) const;  // this after rhs
    OperatorExpr adjoint() const;
    OperatorExpr add(const OperatorExpr& rhs) const;
    OperatorExpr scaled(Complex factor) const;

    // Structural equality of canonical forms.
    bool same_action(const OperatorExpr& rhs, double tol = 0.0) const;

    // Largest |mult| over the grid; requires a single term (NotSingleTerm
    // otherwise). Grid approximation of the essential sup of the weight.
    double sup_multiplier_norm() const;

  private:
    GridSpec grid_;
    std::vector<ShiftTerm> terms_;  // shifts strictly increasing

    void insert_term(ShiftTerm term);
};

// Weight w(x) = scale * sqrt(phi(x)/phi(x-t)) for x >= t, 0 below; t = k*h.
// Exact on the whole grid for catalog symbols; for tabulated symbols the
// values use the stored samples (also exact, by the sampling invariant).
OperatorExpr make_weighted_translation(const SymbolSpec& symbol, double t, const GridSpec& grid,
                                       double scale = 1.0);

// Cauchy dual T(T^*T)^{-1} of a single-term operator with nonvanishing
// multiplier on its support: reciprocal-conjugate multiplier, same shift.
OperatorExpr single_term_cauchy_dual(const OperatorExpr& op);

}  // namespace wts
