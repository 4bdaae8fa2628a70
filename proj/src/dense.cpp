#include "wts/dense.hpp"

#include <Eigen/SVD>

namespace wts {

Eigen::MatrixXcd to_dense(const OperatorExpr& op) {
    const GridSpec& g = op.grid();
    if (g.n > kDenseGuard) throw TooLarge("grid too large for the dense oracle");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.n, g.n);
    for (const ShiftTerm& t : op.terms()) {
        for (int j = 0; j < g.n; ++j) {
            int src = j - t.shift;
            if (src < 0 || src >= g.n) continue;
            m(j, src) += t.mult[static_cast<size_t>(j)];
        }
    }
    return m;
}

Eigen::VectorXcd to_dense(const GridFunction& f) {
    Eigen::VectorXcd v(f.size());
    for (int j = 0; j < f.size(); ++j) v(j) = f[j];
    return v;
}

GridFunction from_dense(const GridSpec& g, const Eigen::VectorXcd& v) {
    if (v.size() != g.n) throw GridMismatch("vector length mismatch");
    GridFunction f(g);
    for (int j = 0; j < g.n; ++j) f[j] = v(j);
    return f;
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

double smallest_singular_value_section(const OperatorExpr& op, Complex lambda, int col_hi) {
    const GridSpec& g = op.grid();
    Eigen::MatrixXcd m = to_dense(op);
    m -= lambda * Eigen::MatrixXcd::Identity(g.n, g.n);
    Eigen::MatrixXcd section = m.leftCols(col_hi + 1);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(section);
    return svd.singularValues().minCoeff();
}

int stacked_null_dimension(const std::vector<OperatorExpr>& ops, double tol) {
    if (ops.empty()) return 0;
    const GridSpec& g = ops[0].grid();
    if (g.n > kDenseGuard) throw TooLarge("grid too large for the dense oracle");
    Eigen::MatrixXcd stacked(static_cast<int>(ops.size()) * g.n, g.n);
    for (size_t i = 0; i < ops.size(); ++i)
        stacked.middleRows(static_cast<int>(i) * g.n, g.n) = to_dense(ops[i]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
    const auto& sv = svd.singularValues();
    int nullity = g.n - static_cast<int>(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) <= tol) ++nullity;
    return nullity;
}

}  // namespace wts
