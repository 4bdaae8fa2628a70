#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catalog.hpp"
#include "wts/spectrum.hpp"

using namespace wts;

namespace {

const GridSpec kGrid{0.25, 256};

TranslationTuple single(const SymbolSpec& s, double t = 1.0, const GridSpec& g = kGrid) {
    return make_translation_tuple(g, {s}, {t});
}

}  // namespace

TEST_CASE("power norms") {
    TranslationTuple c = single(SymbolSpec::constant(3.0));
    for (int k : {1, 2, 8, 32}) CHECK(power_norm(c, 0, k).value == doctest::Approx(1.0));

    TranslationTuple e = single(SymbolSpec::exponential(-1.0));
    for (int k : {1, 2, 8, 32})
        CHECK(power_norm(e, 0, k).value == doctest::Approx(std::exp(-k / 2.0)).epsilon(1e-12));

    TranslationTuple a = single(SymbolSpec::affine(1.0, 1.0));
    for (int k : {1, 4, 16})
        CHECK(power_norm(a, 0, k).value == doctest::Approx(std::sqrt(k + 1.0)).epsilon(1e-12));

    CHECK_THROWS_AS(power_norm(c, 0, 300), TruncationExceedsGrid);
}

TEST_CASE("power norm submultiplicativity") {
    for (const SymbolSpec& s : testing::catalog_symbols()) {
        TranslationTuple t = single(s);
        for (int j : {1, 2, 5})
            for (int k : {1, 3, 8}) {
                double pjk = power_norm(t, 0, j + k).value;
                double pj = power_norm(t, 0, j).value;
                double pk = power_norm(t, 0, k).value;
                CHECK(pjk <= pj * pk * (1.0 + 1e-12));
            }
    }
}

TEST_CASE("spectral radius closed forms and estimates") {
    SpectralRadiusEstimate c = spectral_radius(single(SymbolSpec::constant(2.0)), 0, 32);
    CHECK(c.closed_form);
    CHECK(c.value == doctest::Approx(1.0));

    SpectralRadiusEstimate e = spectral_radius(single(SymbolSpec::exponential(-1.0)), 0, 32);
    CHECK(e.closed_form);
    CHECK(std::abs(e.value - std::exp(-0.5)) < 1e-6);
    CHECK(std::abs(e.root_estimate - std::exp(-0.5)) < 2e-2);
    CHECK(std::abs(e.ratio_estimate - std::exp(-0.5)) < 1e-10);

    // phi = x+1: the closed form is 1 and the root estimate converges slowly,
    // (kt+1)^{1/2k}; the report keeps both and their gap.
    SpectralRadiusEstimate a = spectral_radius(single(SymbolSpec::affine(1.0, 1.0)), 0, 32);
    CHECK(a.closed_form);
    CHECK(a.value == doctest::Approx(1.0));
    CHECK(a.root_estimate == doctest::Approx(std::pow(33.0, 1.0 / 64.0)).epsilon(1e-10));
    CHECK(a.gap > 1e-3);

    // Tabulated symbols carry no closed form; the ratio estimate is reported.
    std::vector<double> samples(static_cast<size_t>(kGrid.n));
    for (int j = 0; j < kGrid.n; ++j) samples[static_cast<size_t>(j)] = 1.0 + kGrid.point(j);
    SpectralRadiusEstimate tab = spectral_radius(single(SymbolSpec::tabulated(samples)), 0, 16);
    CHECK_FALSE(tab.closed_form);
    CHECK(tab.value == doctest::Approx(tab.ratio_estimate));
}

TEST_CASE("polydisc bounds") {
    TranslationTuple iso = make_translation_tuple(
        kGrid, {SymbolSpec::constant(2.0), SymbolSpec::constant(3.0)}, {1.0, 0.5});
    SpectralBounds bi = polydisc_bounds(iso, 16);
    CHECK(bi.inner_available);
    CHECK(bi.polydisc_equality);
    CHECK(bi.inner[0] == doctest::Approx(1.0));
    CHECK(bi.inner[1] == doctest::Approx(1.0));
    CHECK(bi.outer[0] == doctest::Approx(1.0));

    SpectralBounds be = polydisc_bounds(single(SymbolSpec::exponential(-1.0)), 16);
    CHECK(be.inner[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(be.outer[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK_FALSE(be.polydisc_equality);

    SpectralBounds ba = polydisc_bounds(single(SymbolSpec::affine(1.0, 1.0)), 16);
    CHECK(ba.inner[0] == doctest::Approx(1.0));
    CHECK(ba.outer[0] == doctest::Approx(1.0));
    CHECK(ba.inner_detail[0].argmax_at_edge);  // grid sup of the dual weight sits at x_max
}

TEST_CASE("bounds consistency across the catalog") {
    for (const SymbolSpec& s : testing::catalog_symbols()) {
        SpectralBounds b = polydisc_bounds(single(s), 16);
        REQUIRE(b.inner_available);
        CHECK(b.inner[0] <= b.outer[0] + 1e-6);
    }
}

TEST_CASE("left invertibility gate") {
    // A tabulated Gaussian-type decay pushes the weight ratio below the
    // threshold, so the dual and the inner bound are refused.
    std::vector<double> samples(static_cast<size_t>(kGrid.n));
    for (int j = 0; j < kGrid.n; ++j) {
        double x = kGrid.point(j);
        samples[static_cast<size_t>(j)] = std::exp(-x * x / 2.0) + 1e-300;
    }
    TranslationTuple t = single(SymbolSpec::tabulated(samples));
    CHECK_THROWS_AS(toral_cauchy_dual(t), NotLeftInvertible);
    SpectralBounds b = polydisc_bounds(t, 8);
    CHECK_FALSE(b.inner_available);
    CHECK(b.outer.size() == 1);
}

TEST_CASE("adjoint eigenfunction witness") {
    TranslationTuple c = single(SymbolSpec::constant(1.0));
    std::vector<Complex> seed(4, Complex{1.0, 0.0});

    EigenfunctionWitness zero = adjoint_eigenfunction(c, Complex{0.0, 0.0}, seed);
    CHECK(zero.residual == 0.0);
    for (int j = 4; j < kGrid.n; ++j) CHECK(zero.f[j] == Complex{0.0, 0.0});

    EigenfunctionWitness half = adjoint_eigenfunction(c, Complex{0.5, 0.0}, seed);
    CHECK(half.residual < 1e-14);
    CHECK(half.summable);
    CHECK(half.convergence_ratio == doctest::Approx(0.25).epsilon(1e-10));
    for (int b = 0; b < 8; ++b) CHECK(std::abs(half.f[4 * b] - std::pow(0.5, b)) < 1e-12);

    TranslationTuple e = single(SymbolSpec::exponential(-1.0));
    double lam = 0.9 * std::exp(-0.5);
    EigenfunctionWitness w = adjoint_eigenfunction(e, Complex{lam, 0.0}, seed);
    CHECK(w.residual < 1e-12);
    CHECK(w.summable);
    CHECK(w.convergence_ratio == doctest::Approx(lam * lam * std::exp(1.0)).epsilon(1e-8));
}

TEST_CASE("point spectrum is empty") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GridSpec small{0.25, 64};
    for (const SymbolSpec& s :
         {SymbolSpec::constant(1.0), SymbolSpec::exponential(-1.0), SymbolSpec::log_shift()}) {
        TranslationTuple t = single(s, 1.0, small);
        for (int trial = 0; trial < 5; ++trial) {
            Complex lam = std::polar(0.5 * unit(rng), 2.0 * M_PI * unit(rng));
            PointSpectrumCheck check = check_no_point_spectrum(t, lam, false);
            CHECK(check.only_zero_solution);
            CHECK(check.max_solution_value == 0.0);
        }
        PointSpectrumCheck at_zero = check_no_point_spectrum(t, Complex{0.0, 0.0}, false);
        CHECK(at_zero.only_zero_solution);
    }
}

TEST_CASE("svd cross-check stays away from zero on safe columns") {
    GridSpec small{0.25, 64};
    TranslationTuple t = single(SymbolSpec::exponential(-1.0), 1.0, small);
    double inner = std::exp(-0.5);
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        Complex lam = std::polar(0.9 * inner * unit(rng), 2.0 * M_PI * unit(rng));
        PointSpectrumCheck check = check_no_point_spectrum(t, lam, true);
        CHECK(check.svd_min_section > 0.01);
        // Restricted to safe columns the operator acts isometrically up to the
        // constant weight, so sigma_min >= c - |lambda|.
        CHECK(check.svd_min_section >= inner - std::abs(lam) - 1e-12);
    }
}

TEST_CASE("circular symmetry conjugation") {
    TranslationTuple t = make_translation_tuple(
        kGrid, {SymbolSpec::log_shift(), SymbolSpec::log_shift()}, {1.0, 0.5});
    CircularSymmetryReport zero = check_circular_symmetry(t, {0.0});
    CHECK(zero.max_residual == 0.0);

    CircularSymmetryReport pi = check_circular_symmetry(t, {M_PI});
    CHECK(pi.holds);
    CHECK(pi.max_residual <= 1e-12);

    std::mt19937 rng(101);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::vector<double> thetas;
    for (int i = 0; i < 5; ++i) thetas.push_back(angle(rng));
    for (const auto& [s1, s2] : testing::catalog_commuting_pairs()) {
        TranslationTuple p = make_translation_tuple(kGrid, {s1, s2}, {1.0, 0.5});
        CircularSymmetryReport r = check_circular_symmetry(p, thetas);
        CHECK(r.holds);
    }
}

TEST_CASE("conjugation preserves the defect multipliers") {
    // Dense route: conjugate S by M_theta, rebuild B_1(Q) from the conjugated
    // matrix, and compare with the defect of the original tuple.
    GridSpec small{0.25, 64};
    TranslationTuple t = single(SymbolSpec::sqrt_affine(), 1.0, small);
    double theta = 1.2345;
    Eigen::MatrixXcd s = to_dense(t.op(0));
    Eigen::VectorXcd phase(small.n);
    for (int j = 0; j < small.n; ++j) phase(j) = std::exp(Complex{0.0, theta * small.point(j)});
    Eigen::MatrixXcd m = phase.asDiagonal();
    Eigen::MatrixXcd conj_s = m.adjoint() * s * m;
    Eigen::MatrixXcd b1 = Eigen::MatrixXcd::Identity(small.n, small.n) - conj_s.adjoint() * conj_s;
    DefectFunction d = toral_defect(t, MultiIndex{1});
    for (int j = 0; j <= d.valid_hi; ++j)
        CHECK(std::abs(b1(j, j).real() - d.values[static_cast<size_t>(j)]) < 1e-10);
}

TEST_CASE("kernel density of adjoint-power kernels") {
    GridSpec small{0.25, 64};
    TranslationTuple t = make_translation_tuple(
        small, {SymbolSpec::log_shift(), SymbolSpec::log_shift()}, {0.5, 0.75});
    KernelDensityReport r = check_kernel_density(t, 5);
    CHECK(r.all_match);
    for (const KernelDensityItem& item : r.items) CHECK(item.oracle_dim == 2 * item.i);

    // A deep enough power covers every cell.
    TranslationTuple wide = make_translation_tuple(small, {SymbolSpec::constant(1.0)}, {4.0});
    KernelDensityReport full = check_kernel_density(wide, 4);
    CHECK(full.all_match);
    CHECK(full.exhausts_grid);
}
