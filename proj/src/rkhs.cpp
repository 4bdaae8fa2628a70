#include "wts/rkhs.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace wts {

namespace {

std::vector<OperatorExpr> toral_duals(const TranslationTuple& tuple, double alpha_threshold) {
    ToralDualReport report = toral_cauchy_dual(tuple, alpha_threshold);
    return report.duals;
}

int lattice_shift(const TranslationTuple& tuple, const MultiIndex& k) {
    int s = 0;
    for (int i = 0; i < tuple.dim(); ++i)
        s += k[static_cast<size_t>(i)] * tuple.shifts()[static_cast<size_t>(i)];
    return s;
}

}  // namespace

const std::vector<double>& KernelSeries::at(const MultiIndex& n) const {
    auto it = coeff.find(n);
    if (it == coeff.end()) throw OutOfDomain("kernel coefficient outside the truncation bound");
    return it->second;
}

const std::vector<Complex>& ModelCoefficients::at(const MultiIndex& k) const {
    auto it = coeff.find(k);
    if (it == coeff.end()) throw OutOfDomain("model coefficient outside the truncation bound");
    return it->second;
}

KernelSeries kernel_coefficients(const TranslationTuple& tuple, int N, double alpha_threshold) {
    tuple.require_commuting();
    const GridSpec& g = tuple.grid();
    std::vector<OperatorExpr> duals = toral_duals(tuple, alpha_threshold);

    KernelSeries series;
    series.grid = g;
    series.d = tuple.dim();
    series.kernel_dim = tuple.shift_min();
    series.truncation = N;
    series.shifts = tuple.shifts();

    int max_needed = lattice_shift(tuple, MultiIndex(static_cast<size_t>(tuple.dim()), N));
    if (max_needed + series.kernel_dim > g.n)
        throw TruncationExceedsGrid("kernel truncation leaves the grid");

    for (int i = 0; i < tuple.dim(); ++i) {
        SpectralRadiusEstimate dual_radius = spectral_radius(tuple, i, std::max(4, N), true);
        series.polyradius.push_back(1.0 / dual_radius.value);
    }

    // Dual powers S'^n over the lattice box, one axis step from a predecessor.
    std::map<MultiIndex, OperatorExpr> powers;
    powers[MultiIndex(static_cast<size_t>(tuple.dim()), 0)] = OperatorExpr::identity(g);
    for (const MultiIndex& n : lattice_box(MultiIndex(static_cast<size_t>(tuple.dim()), N))) {
        if (abs_sum(n) > 0) {
            int axis = 0;
            while (n[static_cast<size_t>(axis)] == 0) ++axis;
            MultiIndex prev = n;
            --prev[static_cast<size_t>(axis)];
            powers[n] = duals[static_cast<size_t>(axis)].compose(powers.at(prev));
        }
        const OperatorExpr& sp = powers.at(n);
        OperatorExpr cn = sp.adjoint().compose(sp);
        if (cn.safe_hi() < series.kernel_dim - 1)
            throw TruncationExceedsGrid("kernel coefficient leaves the grid at n=" + to_string(n));
        std::vector<double> values(static_cast<size_t>(series.kernel_dim), 0.0);
        if (!cn.is_zero()) {
            const ShiftTerm& term = cn.terms()[0];
            for (int b = 0; b < series.kernel_dim; ++b)
                values[static_cast<size_t>(b)] = term.mult[static_cast<size_t>(b)].real();
        }
        series.coeff[n] = std::move(values);
    }

    series.tail_ratios.assign(static_cast<size_t>(tuple.dim()), 0.0);
    for (const auto& [n, values] : series.coeff) {
        for (int i = 0; i < tuple.dim(); ++i) {
            MultiIndex up = n;
            ++up[static_cast<size_t>(i)];
            auto it = series.coeff.find(up);
            if (it == series.coeff.end()) continue;
            for (int b = 0; b < series.kernel_dim; ++b) {
                double lo = values[static_cast<size_t>(b)];
                double hi = it->second[static_cast<size_t>(b)];
                if (lo > 0.0)
                    series.tail_ratios[static_cast<size_t>(i)] =
                        std::max(series.tail_ratios[static_cast<size_t>(i)], hi / lo);
            }
        }
    }

    KernelConditionReport kc =
        check_kernel_condition(tuple, MultiIndex(static_cast<size_t>(tuple.dim()), N));
    series.kernel_condition_holds = kc.holds;
    for (const KernelConditionItem& item : kc.items)
        series.kernel_condition_residual = std::max(series.kernel_condition_residual, item.residual);
    return series;
}

KernelEvaluation evaluate_kernel(const KernelSeries& series, const std::vector<Complex>& z,
                                 const std::vector<Complex>& lambda, int cell) {
    if (static_cast<int>(z.size()) != series.d || static_cast<int>(lambda.size()) != series.d)
        throw ValidationError("kernel arguments must have one entry per axis");
    if (cell < 0 || cell >= series.kernel_dim)
        throw OutOfDomain("cell outside the joint kernel");
    for (int i = 0; i < series.d; ++i) {
        if (std::abs(z[static_cast<size_t>(i)]) >= series.polyradius[static_cast<size_t>(i)] ||
            std::abs(lambda[static_cast<size_t>(i)]) >= series.polyradius[static_cast<size_t>(i)])
            throw OutsidePolydisc("kernel argument outside the model polydisc");
    }

    KernelEvaluation eval;
    for (const auto& [n, values] : series.coeff) {
        Complex mono{1.0, 0.0};
        for (int i = 0; i < series.d; ++i)
            for (int m = 0; m < n[static_cast<size_t>(i)]; ++m)
                mono *= z[static_cast<size_t>(i)] * std::conj(lambda[static_cast<size_t>(i)]);
        eval.value += values[static_cast<size_t>(cell)] * mono;
    }

    // Geometric tail over the complement of the box: c_n <= prod gamma_i^{n_i}
    // with gamma_i the per-axis coefficient ratio sup and |z_i lambda_i| < 1/gamma_i.
    double full = 1.0, partial = 1.0;
    bool finite = true;
    for (int i = 0; i < series.d; ++i) {
        double q = series.tail_ratios[static_cast<size_t>(i)] *
                   std::abs(z[static_cast<size_t>(i)]) * std::abs(lambda[static_cast<size_t>(i)]);
        if (q >= 1.0) {
            finite = false;
            break;
        }
        full *= 1.0 / (1.0 - q);
        partial *= (1.0 - std::pow(q, static_cast<double>(series.truncation + 1))) / (1.0 - q);
    }
    eval.tail_finite = finite;
    eval.tail_bound = finite ? std::max(0.0, full - partial)
                             : std::numeric_limits<double>::infinity();
    return eval;
}

PolydiscSample make_polydisc_sample(const KernelSeries& series,
                                    std::vector<std::vector<Complex>> points) {
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != series.d)
            throw ValidationError("sample point dimension mismatch");
        for (int i = 0; i < series.d; ++i)
            if (std::abs(p[static_cast<size_t>(i)]) >= series.polyradius[static_cast<size_t>(i)])
                throw OutsidePolydisc("sample point outside the model polydisc");
    }
    return PolydiscSample{std::move(points)};
}

PsdReport check_psd(const KernelSeries& series, const PolydiscSample& samples, int cell,
                    double tol) {
    int m = static_cast<int>(samples.points.size());
    if (m < 1) throw ValidationError("PSD check needs at least one sample point");
    PsdReport report;
    report.sample_count = m;
    Eigen::MatrixXcd gram(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            gram(a, b) = evaluate_kernel(series, samples.points[static_cast<size_t>(a)],
                                         samples.points[static_cast<size_t>(b)], cell)
                             .value;
    report.hermitian_asymmetry = (gram - gram.adjoint()).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd sym = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = es.eigenvalues().minCoeff();
    report.trace = sym.trace().real();
    report.psd = report.min_eigenvalue >= -tol * std::max(1.0, report.trace);
    return report;
}

ModelCoefficients model_map(const TranslationTuple& tuple, const GridFunction& f, int N,
                            double alpha_threshold) {
    tuple.require_commuting();
    const GridSpec& g = tuple.grid();
    if (f.grid != g) throw GridMismatch("model map input on a different grid");
    std::vector<OperatorExpr> dual_adjoints;
    for (OperatorExpr& d : toral_duals(tuple, alpha_threshold))
        dual_adjoints.push_back(d.adjoint());

    int kmin = tuple.shift_min();
    int max_needed = lattice_shift(tuple, MultiIndex(static_cast<size_t>(tuple.dim()), N));
    if (max_needed + kmin > g.n)
        throw TruncationExceedsGrid("model truncation leaves the grid");

    ModelCoefficients out;
    out.truncation = N;
    out.kernel_dim = kmin;

    std::map<MultiIndex, GridFunction> stages;
    stages[MultiIndex(static_cast<size_t>(tuple.dim()), 0)] = f;
    for (const MultiIndex& k : lattice_box(MultiIndex(static_cast<size_t>(tuple.dim()), N))) {
        if (abs_sum(k) > 0) {
            int axis = 0;
            while (k[static_cast<size_t>(axis)] == 0) ++axis;
            MultiIndex prev = k;
            --prev[static_cast<size_t>(axis)];
            stages[k] = dual_adjoints[static_cast<size_t>(axis)].apply(stages.at(prev));
        }
        const GridFunction& v = stages.at(k);
        std::vector<Complex> proj(static_cast<size_t>(kmin));
        for (int b = 0; b < kmin; ++b) proj[static_cast<size_t>(b)] = v[b];
        out.coeff[k] = std::move(proj);
    }
    return out;
}

IntertwiningReport check_intertwining(const TranslationTuple& tuple, const GridFunction& f, int N,
                                      double tol) {
    IntertwiningReport report;
    report.truncation = N;
    ModelCoefficients uf = model_map(tuple, f, N);
    for (int j = 0; j < tuple.dim(); ++j) {
        GridFunction sf = tuple.op(j).apply(f);
        ModelCoefficients usf = model_map(tuple, sf, N);
        for (const MultiIndex& k : lattice_sup_ball(tuple.dim(), N - 1)) {
            const std::vector<Complex>& lhs = usf.at(k);
            std::vector<Complex> rhs(lhs.size(), Complex{0.0, 0.0});
            if (k[static_cast<size_t>(j)] >= 1) {
                MultiIndex down = k;
                --down[static_cast<size_t>(j)];
                rhs = uf.at(down);
            }
            for (size_t b = 0; b < lhs.size(); ++b)
                report.max_residual = std::max(report.max_residual, std::abs(lhs[b] - rhs[b]));
        }
    }
    report.holds = report.max_residual <= tol;
    return report;
}

std::vector<int> model_safe_source_cells(const TranslationTuple& tuple, int N) {
    const GridSpec& g = tuple.grid();
    int kmin = tuple.shift_min();
    int max_shift = *std::max_element(tuple.shifts().begin(), tuple.shifts().end());
    int max_lattice = lattice_shift(tuple, MultiIndex(static_cast<size_t>(tuple.dim()), N));
    int hi = g.n - 1 - max_lattice - max_shift;

    std::vector<char> unsafe(static_cast<size_t>(g.n), 0);
    for (int j = 0; j < tuple.dim(); ++j) {
        for (const MultiIndex& k : lattice_sup_ball(tuple.dim(), N)) {
            if (abs_sum(k) == 0 || k[static_cast<size_t>(j)] != 0) continue;
            // f mass at cell k.shifts - t_j + [0, kmin) feeds the spurious
            // coefficient at lattice point k of U(S_j f).
            int base = lattice_shift(tuple, k) - tuple.shifts()[static_cast<size_t>(j)];
            for (int b = 0; b < kmin; ++b) {
                int c = base + b;
                if (c >= 0 && c < g.n) unsafe[static_cast<size_t>(c)] = 1;
            }
        }
    }
    std::vector<int> cells;
    for (int c = 0; c <= hi; ++c)
        if (!unsafe[static_cast<size_t>(c)]) cells.push_back(c);
    return cells;
}

SphericalModelReport spherical_model_condition(const TranslationTuple& tuple,
                                               const MultiIndex& alpha_max, double tol) {
    tuple.require_commuting();
    SphericalDualReport duals = spherical_cauchy_dual(tuple);
    if (!duals.dual_commutes)
        throw DualNotCommuting("spherical Cauchy dual does not commute at the working tolerance");

    const GridSpec& g = tuple.grid();
    int d = tuple.dim();
    int kmin = tuple.shift_min();

    SphericalModelReport report;
    report.alpha_max = alpha_max;
    report.tol = tol;

    std::map<MultiIndex, std::vector<GridFunction>> stage;  // S^{s alpha} e_b per basis cell
    std::vector<GridFunction> basis;
    for (int b = 0; b < kmin; ++b) basis.push_back(unit_cell(g, b));
    stage[MultiIndex(static_cast<size_t>(d), 0)] = basis;

    for (const MultiIndex& alpha : lattice_box(alpha_max)) {
        if (abs_sum(alpha) > 0) {
            int axis = 0;
            while (alpha[static_cast<size_t>(axis)] == 0) ++axis;
            MultiIndex prev = alpha;
            --prev[static_cast<size_t>(axis)];
            std::vector<GridFunction> next;
            for (const GridFunction& v : stage.at(prev))
                next.push_back(duals.duals[static_cast<size_t>(axis)].apply(v));
            stage[alpha] = std::move(next);
        }

        double a_factor = 1.0;  // (d+|alpha|-1)! / ((d-1)! alpha!)
        {
            int total = abs_sum(alpha);
            double num = 1.0;
            for (int m = 1; m <= total; ++m) num *= static_cast<double>(d - 1 + m);
            double den = 1.0;
            for (int i = 0; i < d; ++i)
                for (int m = 2; m <= alpha[static_cast<size_t>(i)]; ++m) den *= static_cast<double>(m);
            a_factor = num / den;
        }

        for (int j = 0; j < d; ++j) {
            SphericalModelItem item;
            item.j = j;
            item.alpha = alpha;
            item.a_s_alpha = a_factor;
            double worst = 0.0;
            for (int b = 0; b < kmin; ++b) {
                GridFunction lhs = tuple.adjoint_op(j).apply(stage.at(alpha)[static_cast<size_t>(b)]);
                GridFunction rhs(g);
                if (alpha[static_cast<size_t>(j)] >= 1) {
                    MultiIndex down = alpha;
                    --down[static_cast<size_t>(j)];
                    double factor = static_cast<double>(alpha[static_cast<size_t>(j)]) /
                                    static_cast<double>(d + abs_sum(alpha) - 1);
                    const GridFunction& prev = stage.at(down)[static_cast<size_t>(b)];
                    for (int c = 0; c < g.n; ++c) rhs[c] = factor * prev[c];
                }
                GridFunction diff = lhs;
                for (int c = 0; c < g.n; ++c) diff[c] -= rhs[c];
                worst = std::max(worst, norm(diff));
            }
            item.residual = worst;
            item.pass = worst <= tol;
            report.items.push_back(std::move(item));
        }
    }

    report.holds_all = true;
    for (const SphericalModelItem& item : report.items)
        report.holds_all = report.holds_all && item.pass;
    int best = 0;
    for (int m = 1; m <= abs_sum(alpha_max); ++m) {
        bool all = true;
        for (const SphericalModelItem& item : report.items)
            if (abs_sum(item.alpha) <= m && !item.pass) all = false;
        if (all) best = m;
        else break;
    }
    report.max_passing_order = best;
    return report;
}

}  // namespace wts
