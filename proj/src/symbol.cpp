#include "wts/symbol.hpp"

#include <algorithm>
#include <cmath>

namespace wts {

SymbolSpec SymbolSpec::constant(double value) {
    SymbolSpec s;
    s.kind = SymbolKind::Constant;
    s.c = value;
    return s;
}
SymbolSpec SymbolSpec::affine(double slope, double intercept) {
    SymbolSpec s;
    s.kind = SymbolKind::Affine;
    s.a = slope;
    s.b = intercept;
    return s;
}
SymbolSpec SymbolSpec::reciprocal_affine() {
    SymbolSpec s;
    s.kind = SymbolKind::ReciprocalAffine;
    return s;
}
SymbolSpec SymbolSpec::moebius(double lambda) {
    SymbolSpec s;
    s.kind = SymbolKind::Moebius;
    s.lambda = lambda;
    return s;
}
SymbolSpec SymbolSpec::log_shift() {
    SymbolSpec s;
    s.kind = SymbolKind::LogShift;
    return s;
}
SymbolSpec SymbolSpec::exponential(double beta) {
    SymbolSpec s;
    s.kind = SymbolKind::Exp;
    s.beta = beta;
    return s;
}
SymbolSpec SymbolSpec::two_minus_exp() {
    SymbolSpec s;
    s.kind = SymbolKind::TwoMinusExp;
    return s;
}
SymbolSpec SymbolSpec::sqrt_affine() {
    SymbolSpec s;
    s.kind = SymbolKind::SqrtAffine;
    return s;
}
SymbolSpec SymbolSpec::tabulated(std::vector<double> samples) {
    SymbolSpec s;
    s.kind = SymbolKind::Tabulated;
    s.samples = std::move(samples);
    return s;
}

std::string SymbolSpec::kind_name() const {
    switch (kind) {
        case SymbolKind::Constant: return "constant";
        case SymbolKind::Affine: return "affine";
        case SymbolKind::ReciprocalAffine: return "reciprocal-affine";
        case SymbolKind::Moebius: return "moebius";
        case SymbolKind::LogShift: return "log-shift";
        case SymbolKind::Exp: return "exp";
        case SymbolKind::TwoMinusExp: return "two-minus-exp";
        case SymbolKind::SqrtAffine: return "sqrt-affine";
        case SymbolKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

double eval_symbol(const SymbolSpec& spec, double x, const GridSpec& grid) {
    if (x < 0.0) throw OutOfDomain("symbol evaluated at negative x");
    double value = 0.0;
    switch (spec.kind) {
        case SymbolKind::Constant: value = spec.c; break;
        case SymbolKind::Affine: value = spec.a * x + spec.b; break;
        case SymbolKind::ReciprocalAffine: value = 1.0 / (x + 1.0); break;
        case SymbolKind::Moebius: value = (x + spec.lambda) / (x + 1.0); break;
        case SymbolKind::LogShift: value = std::log(x + 2.0); break;
        case SymbolKind::Exp: value = std::exp(spec.beta * x); break;
        case SymbolKind::TwoMinusExp: value = 2.0 - std::exp(-x); break;
        case SymbolKind::SqrtAffine: value = std::sqrt(x + 1.0); break;
        case SymbolKind::Tabulated: {
            double ratio = x / grid.h;
            double rounded = std::round(ratio);
            if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
                throw OutOfDomain("tabulated symbol evaluated off-grid");
            int j = static_cast<int>(rounded);
            if (j < 0 || j >= static_cast<int>(spec.samples.size()))
                throw OutOfDomain("tabulated symbol evaluated outside its samples");
            value = spec.samples[static_cast<size_t>(j)];
            break;
        }
    }
    if (!std::isfinite(value) || value <= spec.positivity_floor)
        throw NonPositiveSymbol("symbol value at x=" + std::to_string(x) +
                                " is not positive: " + std::to_string(value));
    return value;
}

bool symbol_is_constant(const SymbolSpec& spec, const GridSpec& grid, double tol) {
    double lo = eval_symbol(spec, 0.0, grid);
    double hi = lo;
    int count = spec.is_tabulated() ? static_cast<int>(spec.samples.size()) : grid.n;
    for (int j = 1; j < count; ++j) {
        double v = eval_symbol(spec, grid.point(j), grid);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return (hi - lo) <= tol * std::max(1.0, hi);
}

GridWindow default_window(const GridSpec& grid, int max_order, double max_step) {
    int k = shift_count(grid, max_step);
    int hi = grid.n - 1 - max_order * k;
    if (hi < 0) throw WindowTooSmall("grid cannot hold the requested difference orders");
    return GridWindow{0, hi};
}

DifferenceProfile difference_profile(const SymbolSpec& spec, const GridSpec& grid, double step,
                                     int max_order, const GridWindow& window) {
    int k = shift_count(grid, step);
    if (max_order < 0) throw WindowTooSmall("negative difference order");
    int len = window.hi - window.lo + 1;
    if (window.lo < 0 || window.hi >= grid.n || len <= 0)
        throw WindowTooSmall("difference window outside grid");
    if (window.hi + max_order * k >= grid.n)
        throw WindowTooSmall("window leaves no room for the requested orders");

    DifferenceProfile p;
    p.step = step;
    p.step_cells = k;
    p.max_order = max_order;
    p.window = window;
    p.table.resize(static_cast<size_t>(max_order) + 1);

    // Order 0 needs values up to window.hi + max_order*k so higher orders can
    // be formed without leaving the window.
    std::vector<double>& base = p.table[0];
    base.resize(static_cast<size_t>(len + max_order * k));
    for (int i = 0; i < len + max_order * k; ++i)
        base[static_cast<size_t>(i)] = eval_symbol(spec, grid.point(window.lo + i), grid);
    for (int m = 1; m <= max_order; ++m) {
        const std::vector<double>& prev = p.table[static_cast<size_t>(m - 1)];
        std::vector<double>& cur = p.table[static_cast<size_t>(m)];
        cur.resize(prev.size() - static_cast<size_t>(k));
        for (size_t i = 0; i < cur.size(); ++i) cur[i] = prev[i + static_cast<size_t>(k)] - prev[i];
    }
    // Trim order-0 row back to the window for callers.
    p.table[0].resize(static_cast<size_t>(len));
    for (int m = 1; m <= max_order; ++m) {
        size_t keep = static_cast<size_t>(len);
        if (p.table[static_cast<size_t>(m)].size() > keep) p.table[static_cast<size_t>(m)].resize(keep);
    }
    return p;
}

SymbolClassVerdict classify_symbol(const SymbolSpec& spec, const GridSpec& grid, int max_order,
                                   const std::vector<double>& step_set, double rel_tol) {
    if (step_set.empty()) throw WindowTooSmall("empty step set");
    double max_step = *std::max_element(step_set.begin(), step_set.end());
    GridWindow window = default_window(grid, max_order, max_step);

    SymbolClassVerdict verdict;
    verdict.max_order = max_order;
    verdict.steps = step_set;

    double phimax = 0.0;
    for (int j = window.lo; j <= window.hi; ++j)
        phimax = std::max(phimax, std::abs(eval_symbol(spec, grid.point(j), grid)));
    double tol = rel_tol * std::max(1.0, phimax);
    verdict.tol_abs = tol;

    bool cm = true, ca = true, cave = true, cst = true;
    double worst_cm = 0.0, worst_ca = 0.0, worst_cave = 0.0;
    for (double s : step_set) {
        DifferenceProfile p = difference_profile(spec, grid, s, max_order, window);
        for (int m = 1; m <= max_order; ++m) {
            double sign_cm = (m % 2 == 0) ? 1.0 : -1.0;   // (-1)^m
            double sign_ca = (m % 2 == 1) ? 1.0 : -1.0;   // (-1)^{m-1}
            for (double d : p.table[static_cast<size_t>(m)]) {
                worst_cm = std::min(worst_cm, sign_cm * d);
                worst_ca = std::min(worst_ca, sign_ca * d);
                if (sign_cm * d < -tol) cm = false;
                if (sign_ca * d < -tol) ca = false;
                if (m == 1 && std::abs(d) > tol) cst = false;
                if (m == 2) {
                    worst_cave = std::max(worst_cave, d);
                    if (d > tol) cave = false;
                }
            }
        }
    }
    verdict.completely_monotone = cm;
    verdict.completely_alternating = ca;
    verdict.concave = cave;
    verdict.constant = cst;
    verdict.worst_monotone = worst_cm;
    verdict.worst_alternating = worst_ca;
    verdict.worst_concavity = worst_cave;
    return verdict;
}

}  // namespace wts
