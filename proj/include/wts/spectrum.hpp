#pragma once

#include <vector>

#include "wts/tuple.hpp"

namespace wts {

// ||S^k|| on the grid: max composed multiplier of the k-th power (a single
// term by the semigroup law). A grid max can under-approximate the essential
// sup on the half-line; argmax_at_edge flags when the max sits at the last
// valid cell.
struct PowerNorm {
    int k = 0;
    double value = 0.0;
    bool argmax_at_edge = false;
};

PowerNorm power_norm(const TranslationTuple& tuple, int axis, int k, bool dual = false);

struct SpectralRadiusEstimate {
    double value = 0.0;  // closed form when the catalog provides one, else the ratio estimate
    bool closed_form = false;
    double ratio_estimate = 0.0;  // ||S^k|| / ||S^{k-1}|| at k = kmax
    double root_estimate = 0.0;   // ||S^kmax||^{1/kmax}
    double gap = 0.0;
    bool argmax_at_edge = false;
    int kmax = 0;
};

// Spectral radius of S_axis (or of its toral Cauchy dual when dual = true).
// Catalog closed forms: constant -> 1, exp(beta) -> e^{beta t/2} (dual
// e^{-beta t/2}); the remaining catalog kinds have weight ratios tending to 1,
// so their radius is 1. Tabulated symbols carry no closed form.
SpectralRadiusEstimate spectral_radius(const TranslationTuple& tuple, int axis, int kmax,
                                       bool dual = false);

struct SpectralBounds {
    std::vector<double> inner;  // r_i = 1 / r(S_i')
    std::vector<double> outer;  // R_i = r(S_i)
    std::vector<SpectralRadiusEstimate> inner_detail;
    std::vector<SpectralRadiusEstimate> outer_detail;
    std::vector<std::vector<PowerNorm>> power_norms;       // per axis, k = 1..kmax
    std::vector<std::vector<PowerNorm>> dual_power_norms;  // per axis
    bool inner_available = false;
    bool polydisc_equality = false;  // toral isometry case: r = R = (1,...,1)
};

SpectralBounds polydisc_bounds(const TranslationTuple& tuple, int kmax,
                               double alpha_threshold = 1e-8);

struct EigenfunctionWitness {
    Complex lambda;
    GridFunction f;
    double residual = 0.0;              // max |S^* f - lambda f| over the safe window
    std::vector<double> block_norms;    // squared mass per translation block
    double convergence_ratio = 0.0;     // late-block geometric ratio
    bool summable = false;              // ratio < 1
};

// Adjoint eigenfunction for a single operator (d = 1 tuple): extends a seed on
// [0, t) by f(x+t) = lambda * sqrt(phi(x)/phi(x+t)) * f(x).
EigenfunctionWitness adjoint_eigenfunction(const TranslationTuple& tuple, Complex lambda,
                                           const std::vector<Complex>& seed);

struct PointSpectrumCheck {
    Complex lambda;
    bool only_zero_solution = false;
    double max_solution_value = 0.0;  // sup |f| of the forced solution on the safe window
    double svd_min_section = 0.0;     // smallest singular value of (S - lambda I) on safe columns
    int section_cols = 0;
};

// Forward-substitution proof that Sf = lambda f has only the zero solution,
// plus a dense SVD cross-check restricted to columns that cannot spill past
// the right boundary. d = 1 tuples only.
PointSpectrumCheck check_no_point_spectrum(const TranslationTuple& tuple, Complex lambda,
                                           bool with_svd = true);

struct CircularSymmetryReport {
    std::vector<double> thetas;
    double max_residual = 0.0;
    bool holds = false;
};

// M_theta^* S_j M_theta = e^{-i theta t_j} S_j with (M_theta f)(x) = e^{i theta x} f(x).
CircularSymmetryReport check_circular_symmetry(const TranslationTuple& tuple,
                                               const std::vector<double>& thetas,
                                               double tol = 1e-12);

struct KernelDensityItem {
    int i = 0;
    int expected_dim = 0;  // min(i * t_min/h, n)
    int oracle_dim = 0;    // dense null-space dimension of h -> (S_1^{*i} h, ..., S_d^{*i} h)
    bool match = false;
};

struct KernelDensityReport {
    std::vector<KernelDensityItem> items;
    bool all_match = true;
    bool exhausts_grid = false;  // largest tested i covers every cell
};

KernelDensityReport check_kernel_density(const TranslationTuple& tuple, int imax);

}  // namespace wts
