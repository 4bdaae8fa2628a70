#include "wts/tuple.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <functional>
#include <cmath>
#include <map>
#include <sstream>

#include "wts/dense.hpp"

namespace wts {

int abs_sum(const MultiIndex& n) {
    int s = 0;
    for (int v : n) s += v;
    return s;
}

std::vector<MultiIndex> lattice_box(const MultiIndex& bound) {
    std::vector<MultiIndex> out;
    MultiIndex cur(bound.size(), 0);
    while (true) {
        out.push_back(cur);
        size_t axis = 0;
        while (axis < bound.size()) {
            if (cur[axis] < bound[axis]) {
                ++cur[axis];
                for (size_t i = 0; i < axis; ++i) cur[i] = 0;
                break;
            }
            ++axis;
        }
        if (axis == bound.size()) break;
    }
    return out;
}

std::vector<MultiIndex> lattice_sup_ball(int d, int radius) {
    return lattice_box(MultiIndex(static_cast<size_t>(d), radius));
}

std::vector<MultiIndex> lattice_degree(int d, int degree) {
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<size_t>(d), 0);
    // Walk compositions of `degree` into d nonnegative parts.
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == d - 1) {
            cur[static_cast<size_t>(axis)] = remaining;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[static_cast<size_t>(axis)] = v;
            rec(axis + 1, remaining - v);
        }
    };
    if (d > 0) rec(0, degree);
    return out;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

std::string to_string(const MultiIndex& n) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
    os << ")";
    return os.str();
}

namespace {

// Multiplication symbol with its safe window, the carrier of the defect
// recursion Q_i(m)(x) = rho_i(x) m(x + t_i).
struct RealMultiplier {
    std::vector<double> v;
    int valid_hi = 0;
};

RealMultiplier apply_Q(const TranslationTuple& tuple, int axis, const RealMultiplier& m) {
    const GridSpec& g = tuple.grid();
    int k = tuple.shifts()[static_cast<size_t>(axis)];
    RealMultiplier out;
    out.v.assign(static_cast<size_t>(g.n), 0.0);
    out.valid_hi = std::min(m.valid_hi - k, tuple.rho_valid_hi(axis));
    for (int j = 0; j <= out.valid_hi; ++j)
        out.v[static_cast<size_t>(j)] = tuple.rho(axis, j) * m.v[static_cast<size_t>(j + k)];
    return out;
}

RealMultiplier apply_Qs(const TranslationTuple& tuple, const RealMultiplier& m) {
    const GridSpec& g = tuple.grid();
    RealMultiplier out;
    out.v.assign(static_cast<size_t>(g.n), 0.0);
    out.valid_hi = m.valid_hi;
    for (int i = 0; i < tuple.dim(); ++i)
        out.valid_hi =
            std::min({out.valid_hi, m.valid_hi - tuple.shifts()[static_cast<size_t>(i)],
                      tuple.rho_valid_hi(i)});
    for (int i = 0; i < tuple.dim(); ++i) {
        int k = tuple.shifts()[static_cast<size_t>(i)];
        for (int j = 0; j <= out.valid_hi; ++j)
            out.v[static_cast<size_t>(j)] += tuple.rho(i, j) * m.v[static_cast<size_t>(j + k)];
    }
    return out;
}

RealMultiplier identity_multiplier(const GridSpec& g) {
    return RealMultiplier{std::vector<double>(static_cast<size_t>(g.n), 1.0), g.last()};
}

double max_abs_on_safe(const OperatorExpr& e) {
    double m = 0.0;
    for (const ShiftTerm& t : e.terms())
        for (int j = 0; j <= t.valid_hi; ++j)
            m = std::max(m, std::abs(t.mult[static_cast<size_t>(j)]));
    return m;
}

double commutator_residual(const OperatorExpr& a, const OperatorExpr& b) {
    OperatorExpr diff = a.compose(b).add(b.compose(a).scaled(Complex{-1.0, 0.0}));
    return max_abs_on_safe(diff);
}

}  // namespace

TranslationTuple::TranslationTuple(GridSpec grid, std::vector<SymbolSpec> symbols,
                                   std::vector<double> t, std::vector<double> scales,
                                   double commutation_tol)
    : grid_(grid), symbols_(std::move(symbols)), t_(std::move(t)), scales_(std::move(scales)) {
    if (symbols_.empty() || symbols_.size() != t_.size())
        throw ValidationError("tuple needs one symbol per translation");
    if (scales_.empty()) scales_.assign(symbols_.size(), 1.0);
    if (scales_.size() != symbols_.size())
        throw ValidationError("tuple needs one scale per symbol");
    for (double ti : t_) shifts_.push_back(shift_count(grid_, ti));
    for (size_t i = 0; i < symbols_.size(); ++i) {
        ops_.push_back(make_weighted_translation(symbols_[i], t_[i], grid_, scales_[i]));
        adj_ops_.push_back(ops_.back().adjoint());
    }
    rho_.resize(symbols_.size());
    for (size_t i = 0; i < symbols_.size(); ++i) {
        rho_[i].assign(static_cast<size_t>(grid_.n), 0.0);
        int k = shifts_[i];
        double s2 = scales_[i] * scales_[i];
        for (int j = 0; j + k < grid_.n; ++j) {
            double num = eval_symbol(symbols_[i], grid_.point(j + k), grid_);
            double den = eval_symbol(symbols_[i], grid_.point(j), grid_);
            rho_[i][static_cast<size_t>(j)] = s2 * num / den;
        }
    }
    commutation_ = check_commuting(*this, commutation_tol);
}

double TranslationTuple::t_min() const { return *std::min_element(t_.begin(), t_.end()); }
int TranslationTuple::shift_min() const { return *std::min_element(shifts_.begin(), shifts_.end()); }

void TranslationTuple::require_commuting() const {
    if (!commutes()) throw NotCommuting("tuple does not commute at the working tolerance");
}

OperatorExpr TranslationTuple::power(const MultiIndex& k) const {
    OperatorExpr acc = OperatorExpr::identity(grid_);
    for (int i = 0; i < dim(); ++i)
        for (int m = 0; m < k[static_cast<size_t>(i)]; ++m) acc = ops_[static_cast<size_t>(i)].compose(acc);
    return acc;
}

TranslationTuple make_translation_tuple(const GridSpec& grid, std::vector<SymbolSpec> symbols,
                                        std::vector<double> t, std::vector<double> scales,
                                        double commutation_tol) {
    return TranslationTuple(grid, std::move(symbols), std::move(t), std::move(scales),
                            commutation_tol);
}

CommutationReport check_commuting(const TranslationTuple& tuple, double tol) {
    CommutationReport report;
    report.tol = tol;
    const GridSpec& g = tuple.grid();
    for (int i = 0; i < tuple.dim(); ++i) {
        for (int j = i + 1; j < tuple.dim(); ++j) {
            CommutationPair pair;
            pair.i = i;
            pair.j = j;
            const SymbolSpec& si = tuple.symbols()[static_cast<size_t>(i)];
            const SymbolSpec& sj = tuple.symbols()[static_cast<size_t>(j)];
            double ti = tuple.translations()[static_cast<size_t>(i)];
            double tj = tuple.translations()[static_cast<size_t>(j)];
            int kij = tuple.shifts()[static_cast<size_t>(i)] + tuple.shifts()[static_cast<size_t>(j)];
            double worst = 0.0;
            for (int m = kij; m < g.n; ++m) {
                double x = g.point(m);
                double lhs = eval_symbol(si, x, g) * eval_symbol(sj, x - ti, g) /
                             (eval_symbol(si, x - ti, g) * eval_symbol(sj, x - ti - tj, g));
                double rhs = eval_symbol(sj, x, g) * eval_symbol(si, x - tj, g) /
                             (eval_symbol(sj, x - tj, g) * eval_symbol(si, x - ti - tj, g));
                worst = std::max(worst, std::abs(lhs - rhs));
            }
            pair.ratio_residual = worst;
            pair.operator_residual = commutator_residual(tuple.op(i), tuple.op(j));
            pair.commutes = pair.ratio_residual <= tol && pair.operator_residual <= tol;
            report.all_commute = report.all_commute && pair.commutes;
            report.pairs.push_back(std::move(pair));
        }
    }
    return report;
}

double DefectFunction::min_value() const {
    double m = values.empty() || valid_hi < 0 ? 0.0 : values[0];
    for (int j = 0; j <= valid_hi; ++j) m = std::min(m, values[static_cast<size_t>(j)]);
    return m;
}

double DefectFunction::max_value() const {
    double m = values.empty() || valid_hi < 0 ? 0.0 : values[0];
    for (int j = 0; j <= valid_hi; ++j) m = std::max(m, values[static_cast<size_t>(j)]);
    return m;
}

DefectFunction toral_defect(const TranslationTuple& tuple, const MultiIndex& n) {
    tuple.require_commuting();
    if (static_cast<int>(n.size()) != tuple.dim())
        throw ValidationError("defect order dimension mismatch");
    if (abs_sum(n) == 0)
        throw ValidationError("toral defect is only defined for nonzero orders");

    // Q^p(I) over the box 0 <= p <= n, built one axis step at a time.
    std::map<MultiIndex, RealMultiplier> powers;
    powers[MultiIndex(n.size(), 0)] = identity_multiplier(tuple.grid());
    DefectFunction defect;
    defect.toral_order = n;
    defect.values.assign(static_cast<size_t>(tuple.grid().n), 0.0);
    defect.valid_hi = tuple.grid().last();
    for (const MultiIndex& p : lattice_box(n)) {
        if (abs_sum(p) > 0) {
            int axis = 0;
            while (p[static_cast<size_t>(axis)] == 0) ++axis;
            MultiIndex prev = p;
            --prev[static_cast<size_t>(axis)];
            powers[p] = apply_Q(tuple, axis, powers.at(prev));
        }
        const RealMultiplier& qp = powers.at(p);
        double coeff = (abs_sum(p) % 2 == 0) ? 1.0 : -1.0;
        for (size_t i = 0; i < n.size(); ++i) coeff *= binomial(n[i], p[i]);
        defect.valid_hi = std::min(defect.valid_hi, qp.valid_hi);
        for (int j = 0; j < tuple.grid().n; ++j)
            defect.values[static_cast<size_t>(j)] += coeff * qp.v[static_cast<size_t>(j)];
    }
    if (defect.valid_hi < 0) throw TruncationExceedsGrid("defect order leaves the grid");
    for (int j = defect.valid_hi + 1; j < tuple.grid().n; ++j)
        defect.values[static_cast<size_t>(j)] = 0.0;
    return defect;
}

DefectFunction spherical_defect(const TranslationTuple& tuple, int p) {
    tuple.require_commuting();
    if (p <= 0) throw ValidationError("spherical defect order must be positive");
    DefectFunction defect;
    defect.spherical_order = p;
    defect.values.assign(static_cast<size_t>(tuple.grid().n), 0.0);
    RealMultiplier power = identity_multiplier(tuple.grid());
    defect.valid_hi = power.valid_hi;
    for (int q = 0; q <= p; ++q) {
        double coeff = ((q % 2 == 0) ? 1.0 : -1.0) * binomial(p, q);
        defect.valid_hi = std::min(defect.valid_hi, power.valid_hi);
        for (int j = 0; j < tuple.grid().n; ++j)
            defect.values[static_cast<size_t>(j)] += coeff * power.v[static_cast<size_t>(j)];
        if (q < p) power = apply_Qs(tuple, power);
    }
    if (defect.valid_hi < 0) throw TruncationExceedsGrid("defect order leaves the grid");
    for (int j = defect.valid_hi + 1; j < tuple.grid().n; ++j)
        defect.values[static_cast<size_t>(j)] = 0.0;
    return defect;
}

namespace {

ModeClassification classify_mode(const std::vector<std::vector<DefectFunction>>& per_order,
                                 double tol) {
    ModeClassification mode;
    int max_order = static_cast<int>(per_order.size());
    for (int m = 1; m <= max_order; ++m) {
        OrderStats stats;
        stats.order = m;
        bool first = true;
        for (const DefectFunction& d : per_order[static_cast<size_t>(m - 1)]) {
            double lo = d.min_value();
            double hi = d.max_value();
            if (first) {
                stats.min_defect = lo;
                stats.max_defect = hi;
                stats.valid_hi = d.valid_hi;
                first = false;
            } else {
                stats.min_defect = std::min(stats.min_defect, lo);
                stats.max_defect = std::max(stats.max_defect, hi);
                stats.valid_hi = std::min(stats.valid_hi, d.valid_hi);
            }
        }
        mode.orders.push_back(stats);
    }
    auto vanishes = [&](const OrderStats& s) {
        return std::abs(s.min_defect) <= tol && std::abs(s.max_defect) <= tol;
    };
    mode.isometry = !mode.orders.empty() && vanishes(mode.orders[0]);
    for (const OrderStats& s : mode.orders) {
        if (vanishes(s)) {
            mode.isometry_order = s.order;
            break;
        }
    }
    int expansion_run = 0;
    for (const OrderStats& s : mode.orders) {
        if (s.max_defect <= tol && expansion_run == s.order - 1) expansion_run = s.order;
    }
    mode.hyperexpansion_order = expansion_run;
    int contraction_run = 0;
    for (const OrderStats& s : mode.orders) {
        if (s.min_defect >= -tol && contraction_run == s.order - 1) contraction_run = s.order;
    }
    mode.hypercontraction_order = contraction_run;
    mode.complete_hyperexpansion = expansion_run == max_order;
    mode.complete_hypercontraction = contraction_run == max_order;
    return mode;
}

}  // namespace

ClassificationReport classify(const TranslationTuple& tuple, int max_order, double tol) {
    tuple.require_commuting();
    ClassificationReport report;
    report.max_order = max_order;
    report.tol = tol;

    std::vector<std::vector<DefectFunction>> toral(static_cast<size_t>(max_order));
    for (int m = 1; m <= max_order; ++m)
        for (const MultiIndex& n : lattice_degree(tuple.dim(), m))
            toral[static_cast<size_t>(m - 1)].push_back(toral_defect(tuple, n));
    report.toral = classify_mode(toral, tol);

    std::vector<std::vector<DefectFunction>> spherical(static_cast<size_t>(max_order));
    for (int p = 1; p <= max_order; ++p)
        spherical[static_cast<size_t>(p - 1)].push_back(spherical_defect(tuple, p));
    report.spherical = classify_mode(spherical, tol);

    report.symbols_constant = true;
    for (const SymbolSpec& s : tuple.symbols())
        report.symbols_constant = report.symbols_constant && symbol_is_constant(s, tuple.grid(), tol);
    return report;
}

TranslationTuple scale_spherical(const TranslationTuple& tuple) {
    std::vector<double> scales = tuple.scales();
    double f = 1.0 / std::sqrt(static_cast<double>(tuple.dim()));
    for (double& s : scales) s *= f;
    return TranslationTuple(tuple.grid(), tuple.symbols(), tuple.translations(), scales,
                            tuple.commutation().tol);
}

ToralDualReport toral_cauchy_dual(const TranslationTuple& tuple, double alpha_threshold) {
    ToralDualReport report;
    for (int i = 0; i < tuple.dim(); ++i) {
        double alpha = tuple.rho(i, 0);
        for (int j = 0; j <= tuple.rho_valid_hi(i); ++j) alpha = std::min(alpha, tuple.rho(i, j));
        report.alpha.push_back(alpha);
        if (alpha < alpha_threshold)
            throw NotLeftInvertible("axis " + std::to_string(i) +
                                    " is not left invertible: alpha=" + std::to_string(alpha));
        report.duals.push_back(single_term_cauchy_dual(tuple.op(i)));
    }
    double worst = 0.0;
    for (int i = 0; i < tuple.dim(); ++i) {
        OperatorExpr check = report.duals[static_cast<size_t>(i)].adjoint().compose(tuple.op(i));
        OperatorExpr diff = check.add(OperatorExpr::identity(tuple.grid()).scaled(Complex{-1.0, 0.0}));
        worst = std::max(worst, max_abs_on_safe(diff));
    }
    report.identity_residual = worst;
    double dual_res = 0.0;
    for (size_t i = 0; i < report.duals.size(); ++i)
        for (size_t j = i + 1; j < report.duals.size(); ++j)
            dual_res = std::max(dual_res, commutator_residual(report.duals[i], report.duals[j]));
    report.dual_operator_residual = dual_res;
    report.dual_commutes = dual_res <= tuple.commutation().tol;
    return report;
}

SphericalDualReport spherical_cauchy_dual(const TranslationTuple& tuple, double alpha_threshold,
                                          double commutation_tol) {
    const GridSpec& g = tuple.grid();
    SphericalDualReport report;

    // q(x) = sum_i scale_i^2 phi_i(x+t_i)/phi_i(x). Catalog symbols evaluate
    // past the grid edge exactly; tabulated ones cap the valid window.
    int q_valid = g.last();
    std::vector<double> q(static_cast<size_t>(g.n), 0.0);
    for (int j = 0; j < g.n; ++j) {
        bool ok = true;
        double acc = 0.0;
        for (int i = 0; i < tuple.dim() && ok; ++i) {
            if (j <= tuple.rho_valid_hi(i)) {
                acc += tuple.rho(i, j);
                continue;
            }
            try {
                const SymbolSpec& s = tuple.symbols()[static_cast<size_t>(i)];
                double ti = tuple.translations()[static_cast<size_t>(i)];
                double sc = tuple.scales()[static_cast<size_t>(i)];
                acc += sc * sc * eval_symbol(s, g.point(j) + ti, g) / eval_symbol(s, g.point(j), g);
            } catch (const OutOfDomain&) {
                ok = false;
            }
        }
        if (!ok) {
            q_valid = j - 1;
            break;
        }
        q[static_cast<size_t>(j)] = acc;
    }
    double alpha = q[0];
    for (int j = 0; j <= q_valid; ++j) alpha = std::min(alpha, q[static_cast<size_t>(j)]);
    report.alpha = alpha;
    if (alpha < alpha_threshold)
        throw NotJointlyLeftInvertible("Q_s(I) is not bounded below: alpha=" +
                                       std::to_string(alpha));

    for (int i = 0; i < tuple.dim(); ++i) {
        int k = tuple.shifts()[static_cast<size_t>(i)];
        const OperatorExpr& s = tuple.op(i);
        std::vector<Complex> mult(static_cast<size_t>(g.n), Complex{0.0, 0.0});
        int valid = std::min(g.last(), q_valid + k);
        for (int j = k; j < g.n; ++j) {
            if (j - k > q_valid) break;
            mult[static_cast<size_t>(j)] =
                s.terms()[0].mult[static_cast<size_t>(j)] / q[static_cast<size_t>(j - k)];
        }
        report.duals.push_back(OperatorExpr::single(g, k, std::move(mult), valid));
    }

    double op_res = 0.0;
    for (size_t i = 0; i < report.duals.size(); ++i)
        for (size_t j = i + 1; j < report.duals.size(); ++j)
            op_res = std::max(op_res, commutator_residual(report.duals[i], report.duals[j]));
    report.operator_commutator_residual = op_res;

    if (tuple.dim() == 2) {
        // Weight-level commutation criterion for the pair of spherical duals.
        auto w = [&](int axis, int j) -> double {
            if (j < tuple.shifts()[static_cast<size_t>(axis)] || j >= g.n) return 0.0;
            return std::abs(tuple.op(axis).terms()[0].mult[static_cast<size_t>(j)]);
        };
        int k1 = tuple.shifts()[0], k2 = tuple.shifts()[1];
        double worst = 0.0;
        int hi = std::min({g.last(), g.last() - std::abs(k2 - k1)});
        for (int j = k1 + k2; j <= hi; ++j) {
            double w1x = w(0, j), w2x = w(1, j);
            double w1xt2 = w(0, j - k2), w2xt1 = w(1, j - k1);
            double q_at_x_t1 = w1x * w1x + w(1, j - k1 + k2) * w(1, j - k1 + k2);
            double q_at_x_t2 = w(0, j - k2 + k1) * w(0, j - k2 + k1) + w2x * w2x;
            double q_at_x_t1t2 = w1xt2 * w1xt2 + w2xt1 * w2xt1;
            double lhs = w1x * w2xt1 / (q_at_x_t1 * q_at_x_t1t2);
            double rhs = w1xt2 * w2x / (q_at_x_t2 * q_at_x_t1t2);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        report.ratio_identity_residual = worst;
    }
    report.dual_commutes = op_res <= commutation_tol;
    return report;
}

JointKernelDescriptor joint_kernel(const TranslationTuple& tuple) {
    JointKernelDescriptor d;
    d.t_min = tuple.t_min();
    d.dim = tuple.shift_min();
    for (int b = 0; b < d.dim; ++b) d.cells.push_back(b);
    double worst = 0.0, worst_dual = 0.0;
    for (int b = 0; b < d.dim; ++b) {
        GridFunction e = unit_cell(tuple.grid(), b);
        for (int i = 0; i < tuple.dim(); ++i) {
            worst = std::max(worst, norm(tuple.adjoint_op(i).apply(e)));
            worst_dual = std::max(
                worst_dual, norm(single_term_cauchy_dual(tuple.op(i)).adjoint().apply(e)));
        }
    }
    d.annihilation_residual = worst;
    d.dual_annihilation_residual = worst_dual;
    return d;
}

OrthogonalityReport check_orthogonality(const TranslationTuple& tuple, int radius, bool dual,
                                        double tol) {
    tuple.require_commuting();
    const GridSpec& g = tuple.grid();
    OrthogonalityReport report;
    report.radius = radius;
    report.dual = dual;

    std::vector<OperatorExpr> gens;
    for (int i = 0; i < tuple.dim(); ++i)
        gens.push_back(dual ? single_term_cauchy_dual(tuple.op(i)) : tuple.op(i));

    int kmin = tuple.shift_min();
    struct Image {
        MultiIndex k;
        GridFunction f;
        int support_cell;
    };
    std::vector<Image> images;
    for (const MultiIndex& k : lattice_sup_ball(tuple.dim(), radius)) {
        int base = 0;
        for (int i = 0; i < tuple.dim(); ++i)
            base += k[static_cast<size_t>(i)] * tuple.shifts()[static_cast<size_t>(i)];
        if (base + kmin - 1 >= g.n) continue;  // image leaves the grid
        for (int b = 0; b < kmin; ++b) {
            GridFunction e = unit_cell(g, b);
            GridFunction img = e;
            for (int i = 0; i < tuple.dim(); ++i)
                for (int m = 0; m < k[static_cast<size_t>(i)]; ++m)
                    img = gens[static_cast<size_t>(i)].apply(img);
            // Support certificate: the image must live in [k.t, k.t + t_min).
            for (int j = 0; j < g.n; ++j) {
                if (std::abs(img[j]) > 0.0 && (j < base || j >= base + kmin))
                    report.support_bound_exact = false;
            }
            images.push_back(Image{k, std::move(img), base + b});
        }
    }
    report.images_tested = static_cast<int>(images.size());

    for (size_t a = 0; a < images.size(); ++a) {
        for (size_t b = a + 1; b < images.size(); ++b) {
            if (images[a].k == images[b].k) continue;
            if (images[a].support_cell == images[b].support_cell) ++report.support_collisions;
            double gram = std::abs(inner_product(images[a].f, images[b].f));
            report.max_offdiagonal = std::max(report.max_offdiagonal, gram);
        }
    }
    report.orthogonal = report.max_offdiagonal <= tol;
    return report;
}

AnalyticityReport check_analytic(const TranslationTuple& tuple, int radius) {
    const GridSpec& g = tuple.grid();
    AnalyticityReport report;
    report.radius = radius;
    int max_support_lo = 0;
    // One O(n) composition per lattice point: S^k from S^{k - e_axis}.
    std::map<MultiIndex, OperatorExpr> powers;
    powers[MultiIndex(static_cast<size_t>(tuple.dim()), 0)] = OperatorExpr::identity(g);
    for (const MultiIndex& k : lattice_sup_ball(tuple.dim(), radius)) {
        if (abs_sum(k) == 0) continue;
        int axis = 0;
        while (k[static_cast<size_t>(axis)] == 0) ++axis;
        MultiIndex prev = k;
        --prev[static_cast<size_t>(axis)];
        OperatorExpr sk = tuple.op(axis).compose(powers.at(prev));
        int lo = 0;
        for (int i = 0; i < tuple.dim(); ++i)
            lo += k[static_cast<size_t>(i)] * tuple.shifts()[static_cast<size_t>(i)];
        for (const ShiftTerm& t : sk.terms()) {
            for (int j = 0; j < std::min(lo, g.n); ++j)
                report.max_mass_below_support = std::max(
                    report.max_mass_below_support, std::abs(t.mult[static_cast<size_t>(j)]));
        }
        max_support_lo = std::max(max_support_lo, std::min(lo, g.n));
        powers[k] = std::move(sk);
    }
    report.support_bound_exact = report.max_mass_below_support == 0.0;
    report.intersection_dim = g.n - max_support_lo;
    report.intersection_trivial = report.intersection_dim == 0;
    return report;
}

WanderingReport check_wandering(const TranslationTuple& tuple, bool dual) {
    tuple.require_commuting();
    const GridSpec& g = tuple.grid();
    WanderingReport report;
    report.dual = dual;

    std::vector<OperatorExpr> gens;
    for (int i = 0; i < tuple.dim(); ++i)
        gens.push_back(dual ? single_term_cauchy_dual(tuple.op(i)) : tuple.op(i));

    int kmin = tuple.shift_min();
    std::vector<char> covered(static_cast<size_t>(g.n), 0);
    std::vector<GridFunction> spanning(static_cast<size_t>(g.n));
    // Walk the whole admissible lattice: every k with k . shifts <= n-1.
    std::function<void(MultiIndex&, int, GridFunction&)> sweep = [&](MultiIndex& k, int axis,
                                                                     GridFunction& img) {
        if (axis == tuple.dim()) {
            int base = 0;
            for (int i = 0; i < tuple.dim(); ++i)
                base += k[static_cast<size_t>(i)] * tuple.shifts()[static_cast<size_t>(i)];
            for (int b = 0; b < kmin && base + b < g.n; ++b) {
                int cell = base + b;
                if (!covered[static_cast<size_t>(cell)]) {
                    GridFunction e = unit_cell(g, b);
                    GridFunction v = e;
                    for (int i = 0; i < tuple.dim(); ++i)
                        for (int m = 0; m < k[static_cast<size_t>(i)]; ++m)
                            v = gens[static_cast<size_t>(i)].apply(v);
                    if (norm(v) > 0.0) {
                        covered[static_cast<size_t>(cell)] = 1;
                        spanning[static_cast<size_t>(cell)] = std::move(v);
                    }
                }
            }
            return;
        }
        int step = tuple.shifts()[static_cast<size_t>(axis)];
        for (int v = 0;; ++v) {
            k[static_cast<size_t>(axis)] = v;
            int base = 0;
            for (int i = 0; i <= axis; ++i)
                base += k[static_cast<size_t>(i)] * tuple.shifts()[static_cast<size_t>(i)];
            if (base >= g.n) break;
            sweep(k, axis + 1, img);
            if (step == 0) break;
        }
        k[static_cast<size_t>(axis)] = 0;
    };
    MultiIndex k(static_cast<size_t>(tuple.dim()), 0);
    GridFunction dummy(g);
    sweep(k, 0, dummy);

    int count = 0;
    double worst = 0.0;
    for (int c = 0; c < g.n; ++c) {
        if (!covered[static_cast<size_t>(c)]) continue;
        ++count;
        const GridFunction& u = spanning[static_cast<size_t>(c)];
        GridFunction e = unit_cell(g, c);
        Complex coeff = inner_product(e, u) / inner_product(u, u);
        GridFunction res = e;
        for (int j = 0; j < g.n; ++j) res[j] -= coeff * u[j];
        worst = std::max(worst, norm(res));
    }
    report.covered_cells = count;
    report.span_dimension = count;
    report.projection_residual = worst;
    report.full_span = count == g.n;
    return report;
}

KernelConditionReport check_kernel_condition(const TranslationTuple& tuple,
                                             const MultiIndex& alpha_max, double tol) {
    tuple.require_commuting();
    const GridSpec& g = tuple.grid();
    KernelConditionReport report;
    report.alpha_max = alpha_max;
    report.tol = tol;
    int kmin = tuple.shift_min();

    std::vector<OperatorExpr> duals;
    for (int i = 0; i < tuple.dim(); ++i) duals.push_back(single_term_cauchy_dual(tuple.op(i)));

    for (int j = 0; j < tuple.dim(); ++j) {
        MultiIndex bound = alpha_max;
        bound[static_cast<size_t>(j)] = 0;  // only the alpha_j = 0 faces matter
        for (const MultiIndex& alpha : lattice_box(bound)) {
            KernelConditionItem item;
            item.j = j;
            item.alpha = alpha;
            int pushed = 0;
            for (int i = 0; i < tuple.dim(); ++i)
                pushed += alpha[static_cast<size_t>(i)] * tuple.shifts()[static_cast<size_t>(i)];
            item.predicted_zero =
                kmin - 1 + pushed - tuple.shifts()[static_cast<size_t>(j)] < 0;
            double worst = 0.0;
            for (int b = 0; b < kmin; ++b) {
                GridFunction v = unit_cell(g, b);
                for (int i = 0; i < tuple.dim(); ++i)
                    for (int m = 0; m < alpha[static_cast<size_t>(i)]; ++m)
                        v = duals[static_cast<size_t>(i)].apply(v);
                v = tuple.adjoint_op(j).apply(v);
                worst = std::max(worst, norm(v));
            }
            item.residual = worst;
            item.zero = worst <= tol;
            report.holds = report.holds && item.zero;
            report.matches_support_prediction =
                report.matches_support_prediction && (item.zero == item.predicted_zero);
            report.items.push_back(std::move(item));
        }
    }
    return report;
}

HyponormalReport check_hyponormal_powers(const TranslationTuple& tuple, int p, int grid_limit,
                                         double tol) {
    if (tuple.dim() != 1)
        throw ValidationError("hyponormal powers test applies to a single operator");
    const GridSpec& g = tuple.grid();
    if (g.n > grid_limit) throw TooLarge("grid exceeds the dense limit for this test");
    if (p < 1) throw ValidationError("p must be >= 1");

    int k = tuple.shifts()[0];
    int w = g.n - (p - 1) * k;  // cells whose commutator entries are truncation-free
    if (w <= 0) throw TruncationExceedsGrid("power order leaves the grid");

    HyponormalReport report;
    report.p = p;
    report.window_hi = w - 1;

    std::vector<Eigen::MatrixXcd> powers;
    Eigen::MatrixXcd s = to_dense(tuple.op(0));
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(g.n, g.n);
    for (int i = 0; i < p; ++i) {
        powers.push_back(acc);
        acc = s * acc;
    }

    // Joint-hyponormality matrix: entry (i, j) is [H_j^*, H_i].
    Eigen::MatrixXcd block(p * w, p * w);
    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < p; ++i) {
            Eigen::MatrixXcd c = powers[static_cast<size_t>(j)].adjoint() * powers[static_cast<size_t>(i)] -
                                 powers[static_cast<size_t>(i)] * powers[static_cast<size_t>(j)].adjoint();
            block.block(i * w, j * w, w, w) = c.topLeftCorner(w, w);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = es.eigenvalues().minCoeff();
    report.trace_scale = std::max(1.0, std::abs(block.trace().real()));
    report.psd = report.min_eigenvalue >= -tol * report.trace_scale;
    return report;
}

}  // namespace wts
