#include "wts/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "wts/rkhs.hpp"
#include "wts/spectrum.hpp"

namespace wts {

using nlohmann::ordered_json;

namespace {

constexpr unsigned kRunSeed = 0x5eed2024u;

TranslationTuple tuple_from_config(const AnalysisConfig& c) {
    return make_translation_tuple(c.grid, c.symbols, c.t, c.scales, c.tol);
}

ordered_json classification_json(const ClassificationReport& r) {
    auto mode_json = [](const ModeClassification& m) {
        ordered_json orders = ordered_json::array();
        for (const OrderStats& s : m.orders)
            orders.push_back({{"order", s.order},
                              {"min_defect", s.min_defect},
                              {"max_defect", s.max_defect},
                              {"safe_hi", s.valid_hi}});
        return ordered_json{{"isometry", m.isometry},
                            {"isometry_order", m.isometry_order},
                            {"hyperexpansion_order", m.hyperexpansion_order},
                            {"hypercontraction_order", m.hypercontraction_order},
                            {"complete_hyperexpansion", m.complete_hyperexpansion},
                            {"complete_hypercontraction", m.complete_hypercontraction},
                            {"orders", orders}};
    };
    return ordered_json{{"max_order", r.max_order},
                        {"tol", r.tol},
                        {"symbols_constant", r.symbols_constant},
                        {"toral", mode_json(r.toral)},
                        {"spherical", mode_json(r.spherical)}};
}

ordered_json symbol_class_json(const SymbolClassVerdict& v) {
    return ordered_json{{"completely_monotone", v.completely_monotone},
                        {"completely_alternating", v.completely_alternating},
                        {"concave", v.concave},
                        {"constant", v.constant},
                        {"max_order", v.max_order},
                        {"steps", v.steps},
                        {"tol_abs", v.tol_abs},
                        {"worst_monotone", v.worst_monotone},
                        {"worst_alternating", v.worst_alternating},
                        {"worst_concavity", v.worst_concavity}};
}

ordered_json commutation_json(const CommutationReport& r) {
    ordered_json pairs = ordered_json::array();
    for (const CommutationPair& p : r.pairs)
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"ratio_residual", p.ratio_residual},
                         {"operator_residual", p.operator_residual},
                         {"commutes", p.commutes}});
    return ordered_json{{"all_commute", r.all_commute}, {"tol", r.tol}, {"pairs", pairs}};
}

std::string format_csv_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

ordered_json run_classify(const AnalysisConfig& c, const TranslationTuple& tuple,
                          std::string* defect_table) {
    ordered_json out;
    ordered_json per_symbol = ordered_json::array();
    std::vector<double> steps = {c.grid.h, 2 * c.grid.h, 4 * c.grid.h, 8 * c.grid.h};
    for (const SymbolSpec& s : c.symbols) {
        SymbolClassVerdict v = classify_symbol(s, c.grid, c.max_order, steps);
        ordered_json sj = symbol_class_json(v);
        sj["kind"] = s.kind_name();
        per_symbol.push_back(sj);
    }
    out["symbols"] = per_symbol;
    ClassificationReport r = classify(tuple, c.max_order, c.tol);
    out["tuple"] = classification_json(r);
    out["commutation"] = commutation_json(tuple.commutation());

    // Subnormality evidence for a single operator: PSD of the (I, S)
    // commutator matrix on the truncation-free window.
    if (tuple.dim() == 1 && c.grid.n <= 512) {
        HyponormalReport hypo = check_hyponormal_powers(tuple, 2);
        out["hyponormal_pair"] = {{"p", hypo.p},
                                  {"min_eigenvalue", hypo.min_eigenvalue},
                                  {"window_hi", hypo.window_hi},
                                  {"psd", hypo.psd}};
    }

    if (defect_table) {
        std::ostringstream csv;
        csv << "mode,order,x,value\n";
        for (int p = 1; p <= c.max_order; ++p) {
            DefectFunction d = spherical_defect(tuple, p);
            for (int j = 0; j <= d.valid_hi; ++j)
                csv << "spherical," << p << "," << format_csv_double(c.grid.point(j)) << ","
                    << format_csv_double(d.values[static_cast<size_t>(j)]) << "\n";
        }
        *defect_table = csv.str();
    }
    return out;
}

ordered_json run_duals(const AnalysisConfig& c, const TranslationTuple& tuple) {
    ordered_json out;
    ToralDualReport toral = toral_cauchy_dual(tuple);
    out["toral"] = {{"alpha", toral.alpha},
                    {"identity_residual", toral.identity_residual},
                    {"dual_commutes", toral.dual_commutes},
                    {"dual_operator_residual", toral.dual_operator_residual}};
    SphericalDualReport spherical = spherical_cauchy_dual(tuple, 1e-8, c.tol);
    out["spherical"] = {{"alpha", spherical.alpha},
                        {"ratio_identity_residual", spherical.ratio_identity_residual},
                        {"operator_commutator_residual", spherical.operator_commutator_residual},
                        {"dual_commutes", spherical.dual_commutes}};
    return out;
}

ordered_json run_kernel(const AnalysisConfig& c, const TranslationTuple& tuple,
                        std::string* kernel_table) {
    KernelSeries series = kernel_coefficients(tuple, c.lattice_n);
    ordered_json out;
    out["truncation"] = series.truncation;
    out["kernel_dim"] = series.kernel_dim;
    out["polyradius"] = series.polyradius;
    out["tail_ratios"] = series.tail_ratios;
    out["kernel_condition_holds"] = series.kernel_condition_holds;
    out["kernel_condition_residual"] = series.kernel_condition_residual;

    // Diagonal samples z = lambda = (rho, ..., rho) up to 0.9 of the polyradius.
    double rmin = *std::min_element(series.polyradius.begin(), series.polyradius.end());
    std::vector<double> rhos = {0.25 * rmin, 0.5 * rmin, 0.75 * rmin, 0.9 * rmin};
    ordered_json values = ordered_json::array();
    std::ostringstream csv;
    csv << "z_re,z_im,lambda_re,lambda_im,x,value_re,value_im,tail\n";
    for (double rho : rhos) {
        std::vector<Complex> z(static_cast<size_t>(series.d), Complex{rho, 0.0});
        for (int cell = 0; cell < series.kernel_dim; ++cell) {
            KernelEvaluation eval = evaluate_kernel(series, z, z, cell);
            values.push_back({{"rho", rho},
                              {"x", c.grid.point(cell)},
                              {"value_re", eval.value.real()},
                              {"value_im", eval.value.imag()},
                              {"tail_bound", eval.tail_bound},
                              {"tail_finite", eval.tail_finite}});
            csv << format_csv_double(rho) << ",0," << format_csv_double(rho) << ",0,"
                << format_csv_double(c.grid.point(cell)) << ","
                << format_csv_double(eval.value.real()) << ","
                << format_csv_double(eval.value.imag()) << ","
                << format_csv_double(eval.tail_bound) << "\n";
        }
    }
    out["diagonal_values"] = values;
    if (kernel_table) *kernel_table = csv.str();

    // PSD check over deterministic polydisc samples.
    std::mt19937 rng(kRunSeed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<Complex>> pts;
    for (int s = 0; s < c.psd_samples; ++s) {
        std::vector<Complex> p;
        for (int i = 0; i < series.d; ++i) {
            double radius = 0.9 * series.polyradius[static_cast<size_t>(i)] * unit(rng);
            double angle = 2.0 * M_PI * unit(rng);
            p.push_back(std::polar(radius, angle));
        }
        pts.push_back(std::move(p));
    }
    PsdReport psd = check_psd(series, make_polydisc_sample(series, pts), 0, 1e-9);
    out["psd"] = {{"sample_count", psd.sample_count},
                  {"min_eigenvalue", psd.min_eigenvalue},
                  {"trace", psd.trace},
                  {"hermitian_asymmetry", psd.hermitian_asymmetry},
                  {"psd", psd.psd}};
    return out;
}

ordered_json run_spectrum(const AnalysisConfig& c, const TranslationTuple& tuple,
                          std::string* norm_table) {
    ordered_json out;
    SpectralBounds bounds = polydisc_bounds(tuple, c.kmax);
    auto detail_json = [](const SpectralRadiusEstimate& e) {
        return ordered_json{{"value", e.value},
                            {"closed_form", e.closed_form},
                            {"ratio_estimate", e.ratio_estimate},
                            {"root_estimate", e.root_estimate},
                            {"gap", e.gap},
                            {"argmax_at_edge", e.argmax_at_edge},
                            {"kmax", e.kmax}};
    };
    out["outer"] = bounds.outer;
    ordered_json od = ordered_json::array();
    for (const auto& e : bounds.outer_detail) od.push_back(detail_json(e));
    out["outer_detail"] = od;
    out["inner_available"] = bounds.inner_available;
    if (bounds.inner_available) {
        out["inner"] = bounds.inner;
        ordered_json idj = ordered_json::array();
        for (const auto& e : bounds.inner_detail) idj.push_back(detail_json(e));
        out["inner_detail"] = idj;
        out["polydisc_equality"] = bounds.polydisc_equality;
    }

    if (norm_table) {
        std::ostringstream csv;
        csv << "axis,k,power_norm,dual_power_norm\n";
        for (size_t i = 0; i < bounds.power_norms.size(); ++i) {
            for (size_t k = 0; k < bounds.power_norms[i].size(); ++k) {
                csv << i << "," << (k + 1) << ","
                    << format_csv_double(bounds.power_norms[i][k].value) << ",";
                if (bounds.inner_available)
                    csv << format_csv_double(bounds.dual_power_norms[i][k].value);
                csv << "\n";
            }
        }
        *norm_table = csv.str();
    }

    CircularSymmetryReport sym = check_circular_symmetry(tuple, c.theta_list);
    out["circular_symmetry"] = {{"thetas", sym.thetas},
                                {"max_residual", sym.max_residual},
                                {"holds", sym.holds}};

    if (tuple.dim() == 1 && bounds.inner_available) {
        std::mt19937 rng(kRunSeed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double rin = bounds.inner[0];
        ordered_json checks = ordered_json::array();
        bool all_zero_only = true;
        for (int s = 0; s < 10; ++s) {
            Complex lambda = std::polar(0.9 * rin * unit(rng), 2.0 * M_PI * unit(rng));
            PointSpectrumCheck check = check_no_point_spectrum(tuple, lambda, s < 3);
            all_zero_only = all_zero_only && check.only_zero_solution;
            checks.push_back({{"lambda_re", lambda.real()},
                              {"lambda_im", lambda.imag()},
                              {"only_zero_solution", check.only_zero_solution},
                              {"svd_min_section", check.svd_min_section}});
        }
        out["point_spectrum"] = {{"only_zero_solution", all_zero_only}, {"samples", checks}};

        std::vector<Complex> seed(static_cast<size_t>(tuple.shifts()[0]), Complex{1.0, 0.0});
        EigenfunctionWitness witness =
            adjoint_eigenfunction(tuple, Complex{0.5 * rin, 0.0}, seed);
        out["adjoint_eigenfunction"] = {{"lambda_re", witness.lambda.real()},
                                        {"lambda_im", witness.lambda.imag()},
                                        {"residual", witness.residual},
                                        {"convergence_ratio", witness.convergence_ratio},
                                        {"summable", witness.summable}};
    }

    int kmin = tuple.shift_min();
    int imax = std::min(6, (c.grid.n + kmin - 1) / kmin);
    KernelDensityReport density = check_kernel_density(tuple, imax);
    ordered_json items = ordered_json::array();
    for (const KernelDensityItem& item : density.items)
        items.push_back({{"i", item.i},
                         {"expected_dim", item.expected_dim},
                         {"oracle_dim", item.oracle_dim},
                         {"match", item.match}});
    out["kernel_density"] = {{"all_match", density.all_match},
                             {"exhausts_grid", density.exhausts_grid},
                             {"items", items}};
    return out;
}

GridFunction deterministic_safe_function(const TranslationTuple& tuple, int N) {
    std::mt19937 rng(kRunSeed ^ 0x77u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    GridFunction f(tuple.grid());
    for (int c : model_safe_source_cells(tuple, N)) f[c] = Complex{unit(rng), unit(rng)};
    return f;
}

ordered_json run_verify(const AnalysisConfig& c, const TranslationTuple& tuple, bool* failed) {
    ordered_json items = ordered_json::array();
    auto push = [&](const std::string& name, bool pass, ordered_json detail) {
        detail["check"] = name;
        detail["pass"] = pass;
        items.push_back(detail);
        if (!pass) *failed = true;
    };

    push("commutation", tuple.commutes(), commutation_json(tuple.commutation()));
    if (!tuple.commutes()) {
        // Every structural check below assumes a commuting tuple.
        ordered_json out;
        out["checks"] = items;
        out["all_pass"] = false;
        out["note"] = "tuple does not commute; structural checks skipped";
        return out;
    }

    for (bool dual : {false, true}) {
        OrthogonalityReport o = check_orthogonality(tuple, 3, dual, 1e-10);
        push(dual ? "orthogonality_dual" : "orthogonality",
             o.orthogonal && o.support_bound_exact,
             {{"radius", o.radius},
              {"images", o.images_tested},
              {"max_offdiagonal", o.max_offdiagonal},
              {"support_collisions", o.support_collisions},
              {"support_bound_exact", o.support_bound_exact}});
    }

    {
        int total_shift = 0;
        for (int s : tuple.shifts()) total_shift += s;
        int radius = (c.grid.n + total_shift - 1) / total_shift + 1;
        AnalyticityReport a = check_analytic(tuple, radius);
        push("analyticity", a.support_bound_exact && a.intersection_trivial,
             {{"radius", a.radius},
              {"max_mass_below_support", a.max_mass_below_support},
              {"intersection_dim", a.intersection_dim}});
    }

    for (bool dual : {false, true}) {
        WanderingReport w = check_wandering(tuple, dual);
        push(dual ? "wandering_dual" : "wandering",
             w.full_span && w.projection_residual <= 1e-8,
             {{"span_dimension", w.span_dimension},
              {"covered_cells", w.covered_cells},
              {"projection_residual", w.projection_residual}});
    }

    {
        MultiIndex amax(static_cast<size_t>(tuple.dim()), 3);
        KernelConditionReport kc = check_kernel_condition(tuple, amax);
        double worst = 0.0;
        for (const KernelConditionItem& item : kc.items) worst = std::max(worst, item.residual);
        push("kernel_condition", kc.holds,
             {{"alpha_max", kc.alpha_max},
              {"max_residual", worst},
              {"matches_support_prediction", kc.matches_support_prediction}});
    }

    {
        GridFunction f = deterministic_safe_function(tuple, c.lattice_n);
        IntertwiningReport it = check_intertwining(tuple, f, c.lattice_n, c.tol);
        push("intertwining", it.holds,
             {{"truncation", it.truncation}, {"max_residual", it.max_residual}});
    }

    {
        KernelSeries series = kernel_coefficients(tuple, std::min(c.lattice_n, 4));
        std::mt19937 rng(kRunSeed ^ 0x99u);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<std::vector<Complex>> pts;
        for (int s = 0; s < c.psd_samples; ++s) {
            std::vector<Complex> p;
            for (int i = 0; i < series.d; ++i)
                p.push_back(std::polar(0.9 * series.polyradius[static_cast<size_t>(i)] * unit(rng),
                                       2.0 * M_PI * unit(rng)));
            pts.push_back(std::move(p));
        }
        PsdReport psd = check_psd(series, make_polydisc_sample(series, pts), 0, 1e-9);
        push("psd", psd.psd,
             {{"sample_count", psd.sample_count},
              {"min_eigenvalue", psd.min_eigenvalue},
              {"trace", psd.trace}});
    }

    {
        CircularSymmetryReport sym = check_circular_symmetry(tuple, c.theta_list);
        push("symmetry", sym.holds, {{"max_residual", sym.max_residual}});
    }

    ordered_json out;
    out["checks"] = items;
    out["all_pass"] = !*failed;
    return out;
}

}  // namespace

int thread_cap() {
    const char* env = std::getenv("SEMIGROUP_LAB_THREADS");
    if (!env) return 1;
    int cap = std::atoi(env);
    return cap >= 1 ? cap : 1;
}

RunResult run(const AnalysisConfig& config, std::vector<std::string> analyses) {
    auto start = std::chrono::steady_clock::now();
    if (analyses.empty()) analyses = config.analyses;

    RunResult result;
    result.report["schema_version"] = kSchemaVersion;
    result.report["tool_version"] = kToolVersion;
    result.report["thread_cap"] = thread_cap();
    result.report["config"] = config_to_json(config);
    result.report["analyses"] = ordered_json::object();

    TranslationTuple tuple = tuple_from_config(config);
    ordered_json safe_windows;
    for (int i = 0; i < tuple.dim(); ++i)
        safe_windows.push_back(
            {{"axis", i}, {"rho_valid_hi", tuple.rho_valid_hi(i)}});
    result.report["safe_windows"] = safe_windows;

    bool verify_failed = false;
    bool analysis_error = false;
    for (const std::string& a : analyses) {
        try {
            if (a == "classify") {
                std::string defects;
                result.report["analyses"]["classify"] = run_classify(config, tuple, &defects);
                result.tables.emplace_back("defects", std::move(defects));
            } else if (a == "duals") {
                result.report["analyses"]["duals"] = run_duals(config, tuple);
            } else if (a == "kernel") {
                std::string table;
                result.report["analyses"]["kernel"] = run_kernel(config, tuple, &table);
                result.tables.emplace_back("kernel", std::move(table));
            } else if (a == "spectrum") {
                std::string table;
                result.report["analyses"]["spectrum"] = run_spectrum(config, tuple, &table);
                result.tables.emplace_back("power_norms", std::move(table));
            } else if (a == "verify") {
                result.report["analyses"]["verify"] = run_verify(config, tuple, &verify_failed);
            } else {
                throw ValidationError("unknown analysis '" + a + "'");
            }
        } catch (const AnalysisError& e) {
            result.report["analyses"][a] = {{"error", {{"kind", e.kind}, {"message", e.what()}}}};
            analysis_error = true;
        }
    }

    auto end = std::chrono::steady_clock::now();
    result.report["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
    result.exit_code = analysis_error ? 2 : (verify_failed ? 1 : 0);
    return result;
}

void emit(const RunResult& result, const std::string& format, const std::string& path) {
    std::string text = result.report.dump(2);
    text.push_back('\n');
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write report to " + path);
        out << text;
    }
    if (format == "csv" && !path.empty() && path != "-") {
        std::filesystem::path base(path);
        std::filesystem::path stem = base.parent_path() / base.stem();
        for (const auto& [name, body] : result.tables) {
            std::filesystem::path csv_path = stem;
            csv_path += "_" + name + ".csv";
            std::ofstream out(csv_path);
            if (!out) throw IoError("cannot write table to " + csv_path.string());
            out << body;
        }
    }
}

}  // namespace wts
