#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wts/analysis.hpp"
#include "wts/errors.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string format;
    double tol = -1.0;
    int order = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON config file")->required();
    cmd->add_option("--out", opt.out_path, "report path (default: config output.path or stdout)");
    cmd->add_option("--format", opt.format, "json|csv (default: config output.format)");
    cmd->add_option("--tol", opt.tol, "override parameters.tol");
    cmd->add_option("--order", opt.order, "override parameters.maxOrder");
}

int run_subcommand(const std::string& analysis, const CommonOptions& opt) {
    wts::AnalysisConfig config = wts::load_config_file(opt.config_path);
    if (opt.tol > 0.0) config.tol = opt.tol;
    if (opt.order > 0) config.max_order = opt.order;
    if (!opt.format.empty()) {
        if (opt.format != "json" && opt.format != "csv")
            throw wts::ValidationError("format must be json or csv");
        config.out_format = opt.format;
    }
    if (!opt.out_path.empty()) config.out_path = opt.out_path;

    wts::RunResult result = wts::run(config, {analysis});
    wts::emit(result, config.out_format, config.out_path);
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted translation semigroup laboratory"};
    app.require_subcommand(1);

    const char* names[] = {"classify", "duals", "kernel", "spectrum", "verify"};
    const char* descriptions[] = {
        "symbol and tuple classification via defect operators",
        "toral and spherical Cauchy duals with identity residuals",
        "reproducing kernel coefficients, evaluation and PSD check",
        "polydisc spectral bounds, symmetry and point-spectrum checks",
        "full invariant suite; nonzero exit on any failure",
    };
    CommonOptions opts[5];
    for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], descriptions[i]), opts[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        for (int i = 0; i < 5; ++i)
            if (app.get_subcommand(names[i])->parsed()) return run_subcommand(names[i], opts[i]);
        return 2;
    } catch (const wts::AnalysisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}
