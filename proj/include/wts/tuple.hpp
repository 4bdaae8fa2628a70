#pragma once

#include <string>
#include <vector>

#include "wts/operator_expr.hpp"

namespace wts {

using MultiIndex = std::vector<int>;

int abs_sum(const MultiIndex& n);
// All p with 0 <= p <= bound componentwise.
std::vector<MultiIndex> lattice_box(const MultiIndex& bound);
// All k in N^d with |k|_inf <= radius.
std::vector<MultiIndex> lattice_sup_ball(int d, int radius);
// All n in N^d with |n|_1 == degree.
std::vector<MultiIndex> lattice_degree(int d, int degree);
double binomial(int n, int k);
std::string to_string(const MultiIndex& n);

struct CommutationPair {
    int i = 0;
    int j = 0;
    double ratio_residual = 0.0;     // weight-ratio identity, max over x >= t_i+t_j
    double operator_residual = 0.0;  // max multiplier of S_i S_j - S_j S_i on its safe window
    bool commutes = true;
};

struct CommutationReport {
    std::vector<CommutationPair> pairs;
    bool all_commute = true;
    double tol = 0.0;
};

// Commuting d-tuple of weighted translations sharing one grid. scales[i]
// multiplies the i-th weight (used for the 1/sqrt(d) spherical rescaling).
class TranslationTuple {
  public:
    TranslationTuple(GridSpec grid, std::vector<SymbolSpec> symbols, std::vector<double> t,
                     std::vector<double> scales, double commutation_tol);

    int dim() const { return static_cast<int>(symbols_.size()); }
    const GridSpec& grid() const { return grid_; }
    const std::vector<SymbolSpec>& symbols() const { return symbols_; }
    const std::vector<double>& translations() const { return t_; }
    const std::vector<int>& shifts() const { return shifts_; }
    const std::vector<double>& scales() const { return scales_; }
    double t_min() const;
    int shift_min() const;

    const OperatorExpr& op(int i) const { return ops_[static_cast<size_t>(i)]; }
    const OperatorExpr& adjoint_op(int i) const { return adj_ops_[static_cast<size_t>(i)]; }
    const CommutationReport& commutation() const { return commutation_; }
    bool commutes() const { return commutation_.all_commute; }
    void require_commuting() const;

    // scale(i)^2 * phi_i(x_j + t_i) / phi_i(x_j), valid up to n-1-shift_i.
    double rho(int i, int j) const { return rho_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
    int rho_valid_hi(int i) const { return grid_.last() - shifts_[static_cast<size_t>(i)]; }

    // S^k = S_1^{k_1} ... S_d^{k_d} as one composed expression.
    OperatorExpr power(const MultiIndex& k) const;

  private:
    GridSpec grid_;
    std::vector<SymbolSpec> symbols_;
    std::vector<double> t_;
    std::vector<int> shifts_;
    std::vector<double> scales_;
    std::vector<OperatorExpr> ops_;
    std::vector<OperatorExpr> adj_ops_;
    std::vector<std::vector<double>> rho_;
    CommutationReport commutation_;
};

TranslationTuple make_translation_tuple(const GridSpec& grid, std::vector<SymbolSpec> symbols,
                                        std::vector<double> t, std::vector<double> scales = {},
                                        double commutation_tol = 1e-10);

CommutationReport check_commuting(const TranslationTuple& tuple, double tol);

// Alternating binomial sum B(Q)(I) as a multiplication symbol. Values are
// meaningful on grid indices [0, valid_hi]; the recursion consumes
// sum(order_i * shift_i) cells (toral) or order * max(shift) cells (spherical)
// from the right edge.
struct DefectFunction {
    MultiIndex toral_order;   // empty for spherical defects
    int spherical_order = 0;  // 0 for toral defects
    std::vector<double> values;
    int valid_hi = 0;

    double min_value() const;
    double max_value() const;
};

DefectFunction toral_defect(const TranslationTuple& tuple, const MultiIndex& n);
DefectFunction spherical_defect(const TranslationTuple& tuple, int p);

struct OrderStats {
    int order = 0;
    double min_defect = 0.0;
    double max_defect = 0.0;
    int valid_hi = 0;
};

struct ModeClassification {
    std::vector<OrderStats> orders;  // index 0 <-> order 1
    bool isometry = false;           // order-1 defects vanish within tol
    int isometry_order = 0;          // smallest p with order-p defects all ~0, else 0
    int hyperexpansion_order = 0;    // largest p with k-expansion for all k <= p
    int hypercontraction_order = 0;
    bool complete_hyperexpansion = false;   // up to max_order
    bool complete_hypercontraction = false;
};

struct ClassificationReport {
    int max_order = 0;
    double tol = 0.0;
    ModeClassification toral;
    ModeClassification spherical;
    bool symbols_constant = false;  // all symbols constant on the grid within tol
};

ClassificationReport classify(const TranslationTuple& tuple, int max_order, double tol);

// Same symbols and translations, every weight scaled by 1/sqrt(d).
TranslationTuple scale_spherical(const TranslationTuple& tuple);

struct ToralDualReport {
    std::vector<OperatorExpr> duals;
    std::vector<double> alpha;         // per-axis min of rho_i over its valid window
    double identity_residual = 0.0;    // max over axes of |S_i'* S_i - I| on safe window
    bool dual_commutes = true;
    double dual_operator_residual = 0.0;
};

ToralDualReport toral_cauchy_dual(const TranslationTuple& tuple, double alpha_threshold = 1e-8);

struct SphericalDualReport {
    std::vector<OperatorExpr> duals;
    double alpha = 0.0;                       // min of q over its valid window
    double ratio_identity_residual = 0.0;     // d=2 dual commutation criterion (0 when d != 2)
    double operator_commutator_residual = 0.0;
    bool dual_commutes = true;
};

SphericalDualReport spherical_cauchy_dual(const TranslationTuple& tuple,
                                          double alpha_threshold = 1e-8,
                                          double commutation_tol = 1e-10);

struct JointKernelDescriptor {
    double t_min = 0.0;
    int dim = 0;                      // t_min / h
    std::vector<int> cells;           // basis = unit cells [0, dim)
    double annihilation_residual = 0.0;       // max |S_i^* e_b|
    double dual_annihilation_residual = 0.0;  // max |S_i'^* e_b|
};

JointKernelDescriptor joint_kernel(const TranslationTuple& tuple);

struct OrthogonalityReport {
    int radius = 0;
    bool dual = false;
    int images_tested = 0;
    double max_offdiagonal = 0.0;   // Gram mass across distinct lattice points
    int support_collisions = 0;     // pairs k != l whose images share a cell
    bool support_bound_exact = true;  // every image inside [k.t, k.t + t_min)
    bool orthogonal = true;
};

OrthogonalityReport check_orthogonality(const TranslationTuple& tuple, int radius, bool dual,
                                        double tol = 1e-10);

struct AnalyticityReport {
    int radius = 0;
    double max_mass_below_support = 0.0;  // must be exactly zero
    bool support_bound_exact = true;
    int intersection_dim = 0;  // grid cells reachable by every tested S^k
    bool intersection_trivial = false;
};

AnalyticityReport check_analytic(const TranslationTuple& tuple, int radius);

struct WanderingReport {
    bool dual = false;
    int span_dimension = 0;
    int covered_cells = 0;
    double projection_residual = 0.0;
    bool full_span = false;  // covers every grid cell
};

WanderingReport check_wandering(const TranslationTuple& tuple, bool dual);

struct KernelConditionItem {
    int j = 0;
    MultiIndex alpha;
    double residual = 0.0;
    bool zero = false;
    bool predicted_zero = false;  // support arithmetic: kmin-1 + sum alpha_i k_i < k_j
};

struct KernelConditionReport {
    MultiIndex alpha_max;
    double tol = 0.0;
    std::vector<KernelConditionItem> items;
    bool holds = true;
    bool matches_support_prediction = true;
};

KernelConditionReport check_kernel_condition(const TranslationTuple& tuple,
                                             const MultiIndex& alpha_max, double tol = 1e-12);

struct HyponormalReport {
    int p = 0;
    double min_eigenvalue = 0.0;
    double trace_scale = 0.0;
    int window_hi = 0;  // commutator blocks compressed to cells [0, window_hi]
    bool psd = false;
};

// PSD test of the p x p commutator block matrix of (I, S, ..., S^{p-1}) for a
// single operator (d = 1 tuple). Evidence at truncation, scoped to the window
// where the blocks equal their half-line values.
HyponormalReport check_hyponormal_powers(const TranslationTuple& tuple, int p,
                                         int grid_limit = 4096, double tol = 1e-9);

}  // namespace wts
