#pragma once

#include <map>
#include <vector>

#include "wts/spectrum.hpp"
#include "wts/tuple.hpp"

namespace wts {

// Coefficients of the reproducing kernel k(z,l) = sum_n c_n(x) z^n conj(l)^n
// on the joint-kernel cells, c_n = multiplier of (P S'^{*n} S'^n)|_E.
struct KernelSeries {
    GridSpec grid;
    int d = 0;
    int kernel_dim = 0;  // cells of E = [0, t_min)
    int truncation = 0;  // sup-norm bound N on the lattice
    std::vector<int> shifts;
    std::vector<double> polyradius;    // inner radii 1/r(S_i')
    std::vector<double> tail_ratios;   // per-axis sup of c_{n+e_j}/c_n over the table
    std::map<MultiIndex, std::vector<double>> coeff;  // c_n on cells [0, kernel_dim)
    bool kernel_condition_holds = false;  // recorded verdict, scoped to the truncation bound
    double kernel_condition_residual = 0.0;

    const std::vector<double>& at(const MultiIndex& n) const;
};

// Requires a commuting, torally left-invertible tuple. The kernel-condition
// verdict at alpha_max = N is recorded in the series rather than gating it;
// for d >= 2 translation tuples it fails away from trivial faces, and the
// scoped model checks below surface exactly where.
KernelSeries kernel_coefficients(const TranslationTuple& tuple, int N,
                                 double alpha_threshold = 1e-8);

struct KernelEvaluation {
    Complex value{0.0, 0.0};
    double tail_bound = 0.0;
    bool tail_finite = false;
};

KernelEvaluation evaluate_kernel(const KernelSeries& series, const std::vector<Complex>& z,
                                 const std::vector<Complex>& lambda, int cell);

struct PolydiscSample {
    std::vector<std::vector<Complex>> points;
};

// Validates strict membership |z_i| < r_i for every sample point.
PolydiscSample make_polydisc_sample(const KernelSeries& series,
                                    std::vector<std::vector<Complex>> points);

struct PsdReport {
    int sample_count = 0;
    double min_eigenvalue = 0.0;
    double trace = 0.0;
    double hermitian_asymmetry = 0.0;
    bool psd = false;
};

PsdReport check_psd(const KernelSeries& series, const PolydiscSample& samples, int cell,
                    double tol = 1e-9);

// Coefficients of U_f: (P S'^{*k} f) on the joint-kernel cells, |k|_inf <= N.
struct ModelCoefficients {
    int truncation = 0;
    int kernel_dim = 0;
    std::map<MultiIndex, std::vector<Complex>> coeff;

    const std::vector<Complex>& at(const MultiIndex& k) const;
};

ModelCoefficients model_map(const TranslationTuple& tuple, const GridFunction& f, int N,
                            double alpha_threshold = 1e-8);

struct IntertwiningReport {
    int truncation = 0;
    double max_residual = 0.0;  // over axes, |k|_inf <= N-1, and kernel cells
    bool holds = false;
};

// Compares the coefficients of U(S_j f) with the e_j-shifted coefficients of
// U(f) (multiplication by z_j on the lattice).
IntertwiningReport check_intertwining(const TranslationTuple& tuple, const GridFunction& f, int N,
                                      double tol = 1e-10);

// Cells c such that a function supported on them produces no coefficient mass
// on the k_j = 0 faces of U(S_j f) within the tested lattice; the model
// identity U S_j = M_{z_j} U is provable for such supports. The right bound
// also keeps every lattice application on the grid.
std::vector<int> model_safe_source_cells(const TranslationTuple& tuple, int N);

struct SphericalModelItem {
    int j = 0;
    MultiIndex alpha;
    double residual = 0.0;
    double a_s_alpha = 0.0;
    bool pass = false;
};

struct SphericalModelReport {
    MultiIndex alpha_max;
    double tol = 0.0;
    std::vector<SphericalModelItem> items;
    bool holds_all = false;
    int max_passing_order = 0;  // largest m with every |alpha| <= m item passing
};

// Spherical-model compatibility: S_j^* S^{s alpha} g = alpha_j/(d+|alpha|-1) S^{s(alpha-e_j)} g
// for kernel basis vectors g. Refuses (DualNotCommuting) unless the spherical
// Cauchy dual commutes at the working tolerance.
SphericalModelReport spherical_model_condition(const TranslationTuple& tuple,
                                               const MultiIndex& alpha_max, double tol = 1e-10);

}  // namespace wts
