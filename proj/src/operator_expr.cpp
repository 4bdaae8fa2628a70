#include "wts/operator_expr.hpp"

#include <algorithm>
#include <cmath>

namespace wts {

namespace {

// Zero multiplier entries at rows where the term cannot act: row j needs
// source index j - shift inside [0, n-1].
void canonicalize_mult(int shift, std::vector<Complex>& m, int n) {
    for (int j = 0; j < n; ++j) {
        int src = j - shift;
        if (src < 0 || src >= n) m[static_cast<size_t>(j)] = Complex{0.0, 0.0};
    }
}

bool all_zero(const std::vector<Complex>& m) {
    for (const Complex& z : m)
        if (z != Complex{0.0, 0.0}) return false;
    return true;
}

}  // namespace

OperatorExpr OperatorExpr::identity(const GridSpec& g) {
    return multiplication(g, std::vector<Complex>(static_cast<size_t>(g.n), Complex{1.0, 0.0}),
                          g.last());
}

OperatorExpr OperatorExpr::single(const GridSpec& g, int shift, std::vector<Complex> mult,
                                  int valid_hi) {
    if (static_cast<int>(mult.size()) != g.n) throw GridMismatch("multiplier length mismatch");
    canonicalize_mult(shift, mult, g.n);
    OperatorExpr e(g);
    if (!all_zero(mult))
        e.terms_.push_back(ShiftTerm{shift, std::move(mult), std::min(valid_hi, g.last())});
    return e;
}

OperatorExpr OperatorExpr::multiplication(const GridSpec& g, std::vector<Complex> mult,
                                          int valid_hi) {
    return single(g, 0, std::move(mult), valid_hi);
}

int OperatorExpr::safe_hi() const {
    int hi = grid_.last();
    for (const ShiftTerm& t : terms_) hi = std::min(hi, t.valid_hi);
    return hi;
}

GridFunction OperatorExpr::apply(const GridFunction& f) const {
    if (f.grid != grid_) throw GridMismatch("operator applied across grids");
    GridFunction out(grid_);
    for (const ShiftTerm& t : terms_) {
        int lo = std::max(0, t.shift);
        int hi = std::min(grid_.n - 1, grid_.n - 1 + t.shift);
        for (int j = lo; j <= hi; ++j)
            out[j] += t.mult[static_cast<size_t>(j)] * f[j - t.shift];
    }
    return out;
}

void OperatorExpr::insert_term(ShiftTerm term) {
    canonicalize_mult(term.shift, term.mult, grid_.n);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term.shift,
                               [](const ShiftTerm& t, int s) { return t.shift < s; });
    if (it != terms_.end() && it->shift == term.shift) {
        for (int j = 0; j < grid_.n; ++j)
            it->mult[static_cast<size_t>(j)] += term.mult[static_cast<size_t>(j)];
        it->valid_hi = std::min(it->valid_hi, term.valid_hi);
        if (all_zero(it->mult)) terms_.erase(it);
    } else if (!all_zero(term.mult)) {
        terms_.insert(it, std::move(term));
    }
}

OperatorExpr OperatorExpr::compose(const OperatorExpr& rhs) const {
    if (rhs.grid_ != grid_) throw GridMismatch("composition across grids");
    OperatorExpr out(grid_);
    int n = grid_.n;
    for (const ShiftTerm& a : terms_) {
        for (const ShiftTerm& b : rhs.terms_) {
            ShiftTerm t;
            t.shift = a.shift + b.shift;
            t.mult.assign(static_cast<size_t>(n), Complex{0.0, 0.0});
            for (int j = 0; j < n; ++j) {
                int mid = j - a.shift;
                if (mid < 0 || mid >= n) continue;  // b's value there is genuinely absent
                t.mult[static_cast<size_t>(j)] =
                    a.mult[static_cast<size_t>(j)] * b.mult[static_cast<size_t>(mid)];
            }
            // Valid where a is valid, b is valid at the intermediate index, and
            // the intermediate index did not fall off the right edge.
            t.valid_hi = std::min({a.valid_hi, b.valid_hi + a.shift, grid_.last()});
            out.insert_term(std::move(t));
        }
    }
    return out;
}

OperatorExpr OperatorExpr::adjoint() const {
    OperatorExpr out(grid_);
    int n = grid_.n;
    for (const ShiftTerm& a : terms_) {
        ShiftTerm t;
        t.shift = -a.shift;
        t.mult.assign(static_cast<size_t>(n), Complex{0.0, 0.0});
        for (int j = 0; j < n; ++j) {
            int src = j + a.shift;
            if (src < 0 || src >= n) continue;
            t.mult[static_cast<size_t>(j)] = std::conj(a.mult[static_cast<size_t>(src)]);
        }
        t.valid_hi = std::min(a.valid_hi - a.shift, grid_.last());
        out.insert_term(std::move(t));
    }
    return out;
}

OperatorExpr OperatorExpr::add(const OperatorExpr& rhs) const {
    if (rhs.grid_ != grid_) throw GridMismatch("sum across grids");
    OperatorExpr out = *this;
    for (const ShiftTerm& t : rhs.terms_) out.insert_term(t);
    return out;
}

OperatorExpr OperatorExpr::scaled(Complex factor) const {
    OperatorExpr out(grid_);
    if (factor == Complex{0.0, 0.0}) return out;
    for (const ShiftTerm& t : terms_) {
        ShiftTerm s = t;
        for (Complex& z : s.mult) z *= factor;
        out.terms_.push_back(std::move(s));
    }
    return out;
}

bool OperatorExpr::same_action(const OperatorExpr& rhs, double tol) const {
    if (rhs.grid_ != grid_) return false;
    if (tol == 0.0) {
        if (terms_.size() != rhs.terms_.size()) return false;
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].shift != rhs.terms_[i].shift) return false;
            if (terms_[i].mult != rhs.terms_[i].mult) return false;
        }
        return true;
    }
    OperatorExpr diff = add(rhs.scaled(Complex{-1.0, 0.0}));
    for (const ShiftTerm& t : diff.terms_)
        for (const Complex& z : t.mult)
            if (std::abs(z) > tol) return false;
    return true;
}

double OperatorExpr::sup_multiplier_norm() const {
    if (terms_.size() != 1) throw NotSingleTerm("sup multiplier norm needs a single term");
    double m = 0.0;
    for (const Complex& z : terms_[0].mult) m = std::max(m, std::abs(z));
    return m;
}

OperatorExpr make_weighted_translation(const SymbolSpec& symbol, double t, const GridSpec& grid,
                                       double scale) {
    int k = shift_count(grid, t);
    std::vector<Complex> mult(static_cast<size_t>(grid.n), Complex{0.0, 0.0});
    for (int j = k; j < grid.n; ++j) {
        double num = eval_symbol(symbol, grid.point(j), grid);
        double den = eval_symbol(symbol, grid.point(j - k), grid);
        mult[static_cast<size_t>(j)] = scale * std::sqrt(num / den);
    }
    return OperatorExpr::single(grid, k, std::move(mult), grid.last());
}

OperatorExpr single_term_cauchy_dual(const OperatorExpr& op) {
    if (!op.is_single()) throw NotSingleTerm("Cauchy dual needs a single term");
    const ShiftTerm& t = op.terms()[0];
    std::vector<Complex> mult(t.mult.size(), Complex{0.0, 0.0});
    const GridSpec& g = op.grid();
    for (int j = 0; j < g.n; ++j) {
        int src = j - t.shift;
        if (src < 0 || src >= g.n) continue;
        Complex w = t.mult[static_cast<size_t>(j)];
        if (w == Complex{0.0, 0.0})
            throw NotLeftInvertible("vanishing weight on the term's support");
        mult[static_cast<size_t>(j)] = 1.0 / std::conj(w);
    }
    return OperatorExpr::single(g, t.shift, std::move(mult), t.valid_hi);
}

}  // namespace wts
