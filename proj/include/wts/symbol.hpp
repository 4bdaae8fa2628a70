#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wts/grid.hpp"

namespace wts {

// Positive continuous symbol phi on the half-line. Catalog kinds have exact
// closed forms; tabulated symbols are sampled on the analysis grid only
// (no interpolation, so the operator algebra stays exact).
enum class SymbolKind {
    Constant,         // phi(x) = c
    Affine,           // phi(x) = a*x + b
    ReciprocalAffine, // phi(x) = 1/(x+1)
    Moebius,          // phi(x) = (x+lambda)/(x+1)
    LogShift,         // phi(x) = log(x+2)
    Exp,              // phi(x) = exp(beta*x)
    TwoMinusExp,      // phi(x) = 2 - exp(-x)
    SqrtAffine,       // phi(x) = sqrt(x+1)
    Tabulated,
};

struct SymbolSpec {
    SymbolKind kind = SymbolKind::Constant;
    double c = 1.0;       // Constant
    double a = 1.0;       // Affine slope
    double b = 1.0;       // Affine intercept
    double lambda = 0.5;  // Moebius
    double beta = 1.0;    // Exp
    std::vector<double> samples;  // Tabulated: one value per grid point
    // Smallest admitted value; e^{-x} on a long grid gets genuinely tiny, so
    // the default only excludes zero, negatives and denormal junk.
    double positivity_floor = 1e-306;

    static SymbolSpec constant(double value);
    static SymbolSpec affine(double slope, double intercept);
    static SymbolSpec reciprocal_affine();
    static SymbolSpec moebius(double lambda);
    static SymbolSpec log_shift();
    static SymbolSpec exponential(double beta);
    static SymbolSpec two_minus_exp();
    static SymbolSpec sqrt_affine();
    static SymbolSpec tabulated(std::vector<double> samples);

    bool is_tabulated() const { return kind == SymbolKind::Tabulated; }
    std::string kind_name() const;
};

// phi(x). Exact for catalog kinds at any x >= 0; tabulated kinds accept only
// on-grid x (OutOfDomain otherwise). Throws NonPositiveSymbol if the value
// does not clear the positivity floor.
double eval_symbol(const SymbolSpec& spec, double x, const GridSpec& grid);

// True when the symbol is constant across the grid to within tol (absolute,
// relative to max |phi|).
bool symbol_is_constant(const SymbolSpec& spec, const GridSpec& grid, double tol);

struct GridWindow {
    int lo = 0;  // inclusive grid indices
    int hi = 0;
};

// Iterated forward differences of phi with step s = k*h:
//   D^0 phi = phi,  D^{m+1} phi(x) = D^m phi(x+s) - D^m phi(x).
// table[m][i] = D^m phi(x_{lo+i}) for i = 0..(window length - m*k - 1).
struct DifferenceProfile {
    double step = 0.0;
    int step_cells = 0;
    int max_order = 0;
    GridWindow window;
    std::vector<std::vector<double>> table;
};

DifferenceProfile difference_profile(const SymbolSpec& spec, const GridSpec& grid, double step,
                                     int max_order, const GridWindow& window);

// Function-theoretic classification from finite differences. All verdicts are
// scoped: they certify sign patterns only for the orders/steps actually
// tested, which the report records.
struct SymbolClassVerdict {
    bool completely_monotone = false;  // (-1)^m D^m phi >= -tol for m <= max_order
    bool completely_alternating = false;  // (-1)^{m-1} D^m phi >= -tol for 1 <= m <= max_order
    bool concave = false;                 // D^2 phi <= tol
    bool constant = false;                // |D^1 phi| <= tol
    int max_order = 0;
    std::vector<double> steps;
    double tol_abs = 0.0;  // absolute tolerance actually used
    // Most violating values, for reporting.
    double worst_monotone = 0.0;
    double worst_alternating = 0.0;
    double worst_concavity = 0.0;
};

SymbolClassVerdict classify_symbol(const SymbolSpec& spec, const GridSpec& grid, int max_order,
                                   const std::vector<double>& step_set, double rel_tol = 1e-9);

// Default analysis window: leaves room for max_order steps of the largest
// step in step_set.
GridWindow default_window(const GridSpec& grid, int max_order, double max_step);

}  // namespace wts
