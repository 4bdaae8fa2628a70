#include "wts/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "wts/dense.hpp"

namespace wts {

namespace {

OperatorExpr axis_generator(const TranslationTuple& tuple, int axis, bool dual) {
    return dual ? single_term_cauchy_dual(tuple.op(axis)) : tuple.op(axis);
}

// Closed-form spectral radius for catalog symbols. The weight of S^k is
// sqrt(phi(x)/phi(x-kt)); for every catalog kind except exp this ratio is
// bounded by a polynomial in k, so the k-th roots tend to 1.
std::optional<double> closed_form_radius(const SymbolSpec& s, double t, double scale, bool dual) {
    double r;
    switch (s.kind) {
        case SymbolKind::Constant: r = 1.0; break;
        case SymbolKind::Exp: r = std::exp((dual ? -s.beta : s.beta) * t / 2.0); break;
        case SymbolKind::Affine:
        case SymbolKind::ReciprocalAffine:
        case SymbolKind::Moebius:
        case SymbolKind::LogShift:
        case SymbolKind::TwoMinusExp:
        case SymbolKind::SqrtAffine: r = 1.0; break;
        case SymbolKind::Tabulated: return std::nullopt;
        default: return std::nullopt;
    }
    return r * (dual ? 1.0 / scale : scale);
}

}  // namespace

PowerNorm power_norm(const TranslationTuple& tuple, int axis, int k, bool dual) {
    if (k < 1) throw ValidationError("power must be >= 1");
    const GridSpec& g = tuple.grid();
    int step = tuple.shifts()[static_cast<size_t>(axis)];
    if (k * step >= g.n) throw TruncationExceedsGrid("power translation leaves the grid");
    OperatorExpr gen = axis_generator(tuple, axis, dual);
    OperatorExpr pow = gen;
    for (int m = 1; m < k; ++m) pow = gen.compose(pow);
    const ShiftTerm& term = pow.terms()[0];
    PowerNorm out;
    out.k = k;
    int argmax = 0;
    for (int j = 0; j <= term.valid_hi; ++j) {
        double v = std::abs(term.mult[static_cast<size_t>(j)]);
        if (v > out.value) {
            out.value = v;
            argmax = j;
        }
    }
    out.argmax_at_edge = argmax == term.valid_hi;
    return out;
}

SpectralRadiusEstimate spectral_radius(const TranslationTuple& tuple, int axis, int kmax,
                                       bool dual) {
    if (kmax < 4) throw ValidationError("kmax must be >= 4");
    SpectralRadiusEstimate est;
    est.kmax = kmax;
    PowerNorm last = power_norm(tuple, axis, kmax, dual);
    PowerNorm prev = power_norm(tuple, axis, kmax - 1, dual);
    est.ratio_estimate = last.value / prev.value;
    est.root_estimate = std::pow(last.value, 1.0 / static_cast<double>(kmax));
    est.gap = std::abs(est.ratio_estimate - est.root_estimate);
    est.argmax_at_edge = last.argmax_at_edge;
    auto cf = closed_form_radius(tuple.symbols()[static_cast<size_t>(axis)],
                                 tuple.translations()[static_cast<size_t>(axis)],
                                 tuple.scales()[static_cast<size_t>(axis)], dual);
    if (cf) {
        est.closed_form = true;
        est.value = *cf;
    } else {
        est.value = est.ratio_estimate;
    }
    return est;
}

SpectralBounds polydisc_bounds(const TranslationTuple& tuple, int kmax, double alpha_threshold) {
    SpectralBounds bounds;
    bool left_invertible = true;
    for (int i = 0; i < tuple.dim(); ++i) {
        double alpha = tuple.rho(i, 0);
        for (int j = 0; j <= tuple.rho_valid_hi(i); ++j) alpha = std::min(alpha, tuple.rho(i, j));
        left_invertible = left_invertible && alpha >= alpha_threshold;
    }
    for (int i = 0; i < tuple.dim(); ++i) {
        SpectralRadiusEstimate outer = spectral_radius(tuple, i, kmax, false);
        bounds.outer.push_back(outer.value);
        bounds.outer_detail.push_back(outer);
        std::vector<PowerNorm> seq;
        for (int k = 1; k <= kmax; ++k) seq.push_back(power_norm(tuple, i, k, false));
        bounds.power_norms.push_back(std::move(seq));
    }
    bounds.inner_available = left_invertible;
    if (left_invertible) {
        for (int i = 0; i < tuple.dim(); ++i) {
            SpectralRadiusEstimate inner = spectral_radius(tuple, i, kmax, true);
            bounds.inner.push_back(1.0 / inner.value);
            bounds.inner_detail.push_back(inner);
            std::vector<PowerNorm> seq;
            for (int k = 1; k <= kmax; ++k) seq.push_back(power_norm(tuple, i, k, true));
            bounds.dual_power_norms.push_back(std::move(seq));
        }
        bool equal = true;
        for (int i = 0; i < tuple.dim(); ++i)
            equal = equal && std::abs(bounds.inner[static_cast<size_t>(i)] - 1.0) <= 1e-9 &&
                    std::abs(bounds.outer[static_cast<size_t>(i)] - 1.0) <= 1e-9;
        bounds.polydisc_equality = equal;
    }
    return bounds;
}

EigenfunctionWitness adjoint_eigenfunction(const TranslationTuple& tuple, Complex lambda,
                                           const std::vector<Complex>& seed) {
    if (tuple.dim() != 1)
        throw ValidationError("adjoint eigenfunction construction applies to a single operator");
    const GridSpec& g = tuple.grid();
    int k = tuple.shifts()[0];
    if (static_cast<int>(seed.size()) != k)
        throw ValidationError("seed must have one value per cell of [0, t)");

    const ShiftTerm& w = tuple.op(0).terms()[0];
    EigenfunctionWitness witness;
    witness.lambda = lambda;
    witness.f = GridFunction(g);
    for (int j = 0; j < k; ++j) witness.f[j] = seed[static_cast<size_t>(j)];
    // f(x+t) = lambda * f(x) / w(x+t); w is strictly positive on x >= t.
    for (int j = k; j < g.n; ++j)
        witness.f[j] = lambda * witness.f[j - k] / w.mult[static_cast<size_t>(j)];

    GridFunction sf = tuple.adjoint_op(0).apply(witness.f);
    double res = 0.0;
    for (int j = 0; j + k < g.n; ++j) res = std::max(res, std::abs(sf[j] - lambda * witness.f[j]));
    witness.residual = res;

    for (int b = 0; (b + 1) * k <= g.n; ++b) {
        double mass = 0.0;
        for (int j = b * k; j < (b + 1) * k; ++j) mass += std::norm(witness.f[j]);
        witness.block_norms.push_back(mass * g.h);
    }
    size_t nb = witness.block_norms.size();
    if (nb >= 2 && witness.block_norms[nb - 2] > 0.0) {
        witness.convergence_ratio = witness.block_norms[nb - 1] / witness.block_norms[nb - 2];
        witness.summable = witness.convergence_ratio < 1.0;
    } else {
        witness.convergence_ratio = 0.0;
        witness.summable = true;
    }
    return witness;
}

PointSpectrumCheck check_no_point_spectrum(const TranslationTuple& tuple, Complex lambda,
                                           bool with_svd) {
    if (tuple.dim() != 1)
        throw ValidationError("point spectrum check applies to a single operator");
    const GridSpec& g = tuple.grid();
    int k = tuple.shifts()[0];
    const ShiftTerm& w = tuple.op(0).terms()[0];

    PointSpectrumCheck check;
    check.lambda = lambda;

    GridFunction f(g);
    bool weights_positive = true;
    for (int j = k; j < g.n; ++j)
        weights_positive = weights_positive && std::abs(w.mult[static_cast<size_t>(j)]) > 0.0;
    int window_hi;
    if (lambda != Complex{0.0, 0.0}) {
        // (Sf)(x) = 0 on [0, t) forces f = 0 there; the recursion
        // f(x) = w(x) f(x-t) / lambda propagates the zeros up the grid.
        for (int j = 0; j < k; ++j) f[j] = 0.0;
        for (int j = k; j < g.n; ++j)
            f[j] = w.mult[static_cast<size_t>(j)] * f[j - k] / lambda;
        window_hi = g.last();
    } else {
        // Sf = 0 reads w(x) f(x-t) = 0 for x >= t; positive weights force
        // f = 0 wherever an equation exists, i.e. on [0, x_max - t].
        for (int j = k; j < g.n; ++j) f[j - k] = 0.0;
        window_hi = g.n - 1 - k;
    }
    double sup = 0.0;
    for (int j = 0; j <= window_hi; ++j) sup = std::max(sup, std::abs(f[j]));
    check.max_solution_value = sup;
    check.only_zero_solution = sup == 0.0 && weights_positive;

    if (with_svd) {
        check.section_cols = g.n - k;
        check.svd_min_section =
            smallest_singular_value_section(tuple.op(0), lambda, check.section_cols - 1);
    }
    return check;
}

CircularSymmetryReport check_circular_symmetry(const TranslationTuple& tuple,
                                               const std::vector<double>& thetas, double tol) {
    const GridSpec& g = tuple.grid();
    CircularSymmetryReport report;
    report.thetas = thetas;
    for (double theta : thetas) {
        std::vector<Complex> phase(static_cast<size_t>(g.n));
        for (int j = 0; j < g.n; ++j)
            phase[static_cast<size_t>(j)] = std::exp(Complex{0.0, theta * g.point(j)});
        OperatorExpr m_theta = OperatorExpr::multiplication(g, phase, g.last());
        OperatorExpr m_theta_adj = m_theta.adjoint();
        for (int jx = 0; jx < tuple.dim(); ++jx) {
            Complex expected_phase =
                std::exp(Complex{0.0, -theta * tuple.translations()[static_cast<size_t>(jx)]});
            OperatorExpr conjugated = m_theta_adj.compose(tuple.op(jx)).compose(m_theta);
            OperatorExpr target = tuple.op(jx).scaled(expected_phase);
            OperatorExpr diff = conjugated.add(target.scaled(Complex{-1.0, 0.0}));
            double res = 0.0;
            for (const ShiftTerm& t : diff.terms())
                for (int j = 0; j <= t.valid_hi; ++j)
                    res = std::max(res, std::abs(t.mult[static_cast<size_t>(j)]));
            report.max_residual = std::max(report.max_residual, res);
        }
    }
    report.holds = report.max_residual <= tol;
    return report;
}

KernelDensityReport check_kernel_density(const TranslationTuple& tuple, int imax) {
    const GridSpec& g = tuple.grid();
    KernelDensityReport report;
    int kmin = tuple.shift_min();
    for (int i = 1; i <= imax; ++i) {
        KernelDensityItem item;
        item.i = i;
        item.expected_dim = std::min(i * kmin, g.n);
        std::vector<OperatorExpr> adj_powers;
        for (int a = 0; a < tuple.dim(); ++a) {
            OperatorExpr p = tuple.adjoint_op(a);
            for (int m = 1; m < i; ++m) p = tuple.adjoint_op(a).compose(p);
            adj_powers.push_back(std::move(p));
        }
        item.oracle_dim = stacked_null_dimension(adj_powers, 1e-10);
        item.match = item.oracle_dim == item.expected_dim;
        report.all_match = report.all_match && item.match;
        if (i == imax) report.exhausts_grid = item.expected_dim == g.n;
        report.items.push_back(std::move(item));
    }
    return report;
}

}  // namespace wts
