#include "wts/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wts/errors.hpp"

namespace wts {

using nlohmann::ordered_json;

namespace {

SymbolSpec symbol_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw ValidationError("symbol spec needs a \"kind\" string");
    std::string kind = j.at("kind").get<std::string>();
    auto num = [&](const char* field, double fallback, bool required) {
        if (!j.contains(field)) {
            if (required) throw ValidationError("symbol kind '" + kind + "' needs field '" + field + "'");
            return fallback;
        }
        if (!j.at(field).is_number()) throw ValidationError(std::string("field '") + field + "' must be a number");
        return j.at(field).get<double>();
    };
    if (kind == "constant") return SymbolSpec::constant(num("c", 1.0, true));
    if (kind == "affine") return SymbolSpec::affine(num("a", 1.0, true), num("b", 1.0, true));
    if (kind == "reciprocal-affine") return SymbolSpec::reciprocal_affine();
    if (kind == "moebius") return SymbolSpec::moebius(num("lambda", 0.5, true));
    if (kind == "log-shift") return SymbolSpec::log_shift();
    if (kind == "exp") return SymbolSpec::exponential(num("beta", 1.0, true));
    if (kind == "two-minus-exp") return SymbolSpec::two_minus_exp();
    if (kind == "sqrt-affine") return SymbolSpec::sqrt_affine();
    if (kind == "tabulated") {
        if (!j.contains("samples") || !j.at("samples").is_array())
            throw ValidationError("tabulated symbol needs a \"samples\" array");
        std::vector<double> samples;
        for (const auto& v : j.at("samples")) {
            if (!v.is_number()) throw ValidationError("tabulated samples must be numbers");
            samples.push_back(v.get<double>());
        }
        return SymbolSpec::tabulated(std::move(samples));
    }
    throw ValidationError("unknown symbol kind '" + kind + "'");
}

}  // namespace

ordered_json symbol_to_json(const SymbolSpec& s) {
    ordered_json j;
    j["kind"] = s.kind_name();
    switch (s.kind) {
        case SymbolKind::Constant: j["c"] = s.c; break;
        case SymbolKind::Affine:
            j["a"] = s.a;
            j["b"] = s.b;
            break;
        case SymbolKind::Moebius: j["lambda"] = s.lambda; break;
        case SymbolKind::Exp: j["beta"] = s.beta; break;
        case SymbolKind::Tabulated: j["samples"] = s.samples; break;
        default: break;
    }
    return j;
}

AnalysisConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config must be a JSON object");

    AnalysisConfig config;
    if (j.contains("grid")) {
        const auto& gj = j.at("grid");
        if (!gj.is_object()) throw ValidationError("\"grid\" must be an object");
        double h = gj.value("h", 0.25);
        double x_max = gj.value("x_max", 64.0);
        if (h <= 0.0) throw ValidationError("grid step h must be positive");
        config.grid = make_grid(h, x_max);
    }

    if (!j.contains("tuple") || !j.at("tuple").is_object())
        throw ValidationError("config needs a \"tuple\" object");
    const auto& tj = j.at("tuple");
    if (!tj.contains("symbols") || !tj.at("symbols").is_array() || tj.at("symbols").empty())
        throw ValidationError("tuple needs a nonempty \"symbols\" array");
    for (const auto& sj : tj.at("symbols")) config.symbols.push_back(symbol_from_json(sj));
    if (!tj.contains("t") || !tj.at("t").is_array())
        throw ValidationError("tuple needs a \"t\" array");
    for (const auto& v : tj.at("t")) {
        if (!v.is_number()) throw ValidationError("translations must be numbers");
        config.t.push_back(v.get<double>());
    }
    if (config.t.size() != config.symbols.size())
        throw ValidationError("tuple needs one translation per symbol");
    for (double t : config.t) {
        double ratio = t / config.grid.h;
        if (t <= 0.0 || std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
            throw ValidationError("NonGridTranslation: t=" + std::to_string(t) +
                                  " is not a positive multiple of h=" + std::to_string(config.grid.h));
    }
    if (tj.contains("scales")) {
        for (const auto& v : tj.at("scales")) config.scales.push_back(v.get<double>());
        if (config.scales.size() != config.symbols.size())
            throw ValidationError("tuple needs one scale per symbol");
    }
    for (const SymbolSpec& s : config.symbols) {
        if (s.is_tabulated() && static_cast<int>(s.samples.size()) != config.grid.n)
            throw ValidationError("tabulated symbol must carry one sample per grid point");
    }

    if (j.contains("analyses")) {
        for (const auto& a : j.at("analyses")) {
            std::string name = a.get<std::string>();
            if (name != "classify" && name != "duals" && name != "kernel" && name != "spectrum" &&
                name != "verify" && name != "verify-all")
                throw ValidationError("unknown analysis '" + name + "'");
            config.analyses.push_back(name == "verify-all" ? "verify" : name);
        }
    }

    if (j.contains("parameters")) {
        const auto& pj = j.at("parameters");
        config.max_order = pj.value("maxOrder", config.max_order);
        config.lattice_n = pj.value("latticeN", config.lattice_n);
        config.kmax = pj.value("kmax", config.kmax);
        config.tol = pj.value("tol", config.tol);
        config.psd_samples = pj.value("psd_samples", config.psd_samples);
        if (pj.contains("theta_list"))
            for (const auto& v : pj.at("theta_list")) config.theta_list.push_back(v.get<double>());
        if (config.max_order < 1 || config.lattice_n < 1 || config.kmax < 4)
            throw ValidationError("parameters out of range: need maxOrder>=1, latticeN>=1, kmax>=4");
        if (config.tol <= 0.0) throw ValidationError("tol must be positive");
    }
    if (config.theta_list.empty())
        config.theta_list = {0.0, 0.7853981633974483, 1.9, 3.141592653589793, 5.05};

    if (j.contains("output")) {
        const auto& oj = j.at("output");
        config.out_format = oj.value("format", std::string("json"));
        config.out_path = oj.value("path", std::string());
        if (config.out_format != "json" && config.out_format != "csv")
            throw ValidationError("output format must be json or csv");
    }
    return config;
}

AnalysisConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

ordered_json config_to_json(const AnalysisConfig& c) {
    ordered_json j;
    j["grid"] = {{"h", c.grid.h}, {"x_max", c.grid.x_max()}, {"points", c.grid.n}};
    ordered_json symbols = ordered_json::array();
    for (const SymbolSpec& s : c.symbols) symbols.push_back(symbol_to_json(s));
    j["tuple"] = {{"symbols", symbols}, {"t", c.t}};
    if (!c.scales.empty()) j["tuple"]["scales"] = c.scales;
    j["analyses"] = c.analyses;
    j["parameters"] = {{"maxOrder", c.max_order}, {"latticeN", c.lattice_n},
                       {"kmax", c.kmax},         {"tol", c.tol},
                       {"psd_samples", c.psd_samples}, {"theta_list", c.theta_list}};
    j["output"] = {{"format", c.out_format}, {"path", c.out_path}};
    return j;
}

}  // namespace wts
