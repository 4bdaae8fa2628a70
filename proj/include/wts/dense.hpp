#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include "wts/operator_expr.hpp"

namespace wts {

// Dense-matrix oracle. Everything here goes through Eigen and is kept
// independent of the shift-term algebra so the two paths can cross-check
// each other.

inline constexpr int kDenseGuard = 4096;

Eigen::MatrixXcd to_dense(const OperatorExpr& op);

Eigen::VectorXcd to_dense(const GridFunction& f);
GridFunction from_dense(const GridSpec& g, const Eigen::VectorXcd& v);

// Entrywise max |A - B|.
double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Smallest singular value of the columns [0, col_hi] section of (op - lambda*I).
// Restricting the domain to columns that cannot spill past the right edge
// keeps truncation artifacts out of the estimate.
double smallest_singular_value_section(const OperatorExpr& op, Complex lambda, int col_hi);

// Dimension of the numerical null space of the stacked map h -> (A_1 h, ..., A_d h),
// singular values below tol count as zero.
int stacked_null_dimension(const std::vector<OperatorExpr>& ops, double tol);

}  // namespace wts
