#include <charconv>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uqfi/errors.hpp"
#include "uqfi/experiment.hpp"
#include "uqfi/json_io.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> taus;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) throw uqfi::ValidationError("--grid has an empty entry");
        double v = 0.0;
        const char* begin = token.data();
        const char* end = begin + token.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end)
            throw uqfi::ValidationError("--grid entry '" + token + "' is not a number");
        taus.push_back(v);
        token.clear();
    };
    for (char c : text) {
        if (c == ',') flush();
        else token.push_back(c);
    }
    flush();
    return taus;
}

int parse_model(const std::string& text) {
    if (text == "linear") return 0;
    int id = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, id);
    if (ec != std::errc() || ptr != end)
        throw uqfi::ValidationError("--model must be 1..9 or 'linear', got '" + text + "'");
    return id;
}

const char* error_kind(const uqfi::Error& e) {
    if (dynamic_cast<const uqfi::TailFitError*>(&e)) return "TailFitError";
    if (dynamic_cast<const uqfi::NumericError*>(&e)) return "NumericError";
    if (dynamic_cast<const uqfi::ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const uqfi::IoError*>(&e)) return "IoError";
    return "Error";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse feature-importance curves across outcome quantiles"};
    app.require_subcommand(1);
    app.fallthrough(true);

    std::string model_text = "1";
    std::string error_text = "normal";
    std::string fitter_text = "poly";
    std::string grid_text;
    std::string kernel_text = "gaussian";
    std::string out_dir = "out";
    std::string config_path;
    std::string importance_data;
    std::string prune_data;
    uqfi::ExperimentConfig config;
    double bandwidth = 0.0;
    double tau_n_rule = 0.4;
    bool no_center = false;
    bool paper_scale = false;

    app.add_option("--model", model_text, "Benchmark model 1..9 or 'linear'");
    app.add_option("--error", error_text, "Error law: normal|t3|exp2|cauchy");
    app.add_option("--n", config.n, "Sample size per replication");
    app.add_option("--p", config.p, "Number of features");
    app.add_option("--reps", config.reps, "Replications (desk-scale default 50)");
    app.add_option("--seed", config.seed_base, "Base error seed; rep r uses seed+r");
    app.add_option("--feature-seed", config.feature_seed, "Feature seed (fixed across reps)");
    app.add_option("--rho", config.rho, "AR(1) feature correlation");
    app.add_option("--grid", grid_text, "Comma-separated quantile levels, e.g. 0.1,0.5,0.9");
    app.add_option("--fitter", fitter_text, "ols|poly|mcp|external:PATH");
    app.add_option("--degree", config.fitter.basis.degree, "Polynomial basis degree");
    app.add_option("--alpha", config.alpha, "Significance level for pruning tests");
    app.add_option("--tau-n-rule", tau_n_rule, "Tail fraction exponent a in tau_n = n^-a");
    app.add_option("--bandwidth", bandwidth, "Fixed KDE bandwidth (default: Silverman rule)");
    app.add_option("--kernel", kernel_text, "KDE kernel: gaussian|epanechnikov");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--threads", config.threads, "Worker threads (0 = hardware)");
    app.add_flag("--paper-scale", paper_scale, "Use the full 500 replications");
    app.add_flag("--no-center", no_center, "Do not center uncentered file datasets");
    app.add_option("--config", config_path, "JSON config file; explicit flags override it");

    CLI::App* sub_simulate = app.add_subcommand("simulate", "Write a synthetic dataset CSV");
    CLI::App* sub_importance =
        app.add_subcommand("importance", "Estimate the importance curve for a dataset file");
    sub_importance->add_option("data", importance_data, "Dataset CSV")->required();
    CLI::App* sub_prune =
        app.add_subcommand("prune", "Estimate, test, and prune the importance curve");
    sub_prune->add_option("data", prune_data, "Dataset CSV")->required();
    CLI::App* sub_replicate =
        app.add_subcommand("replicate", "Replicated benchmark run with summary table");
    CLI::App* sub_figure =
        app.add_subcommand("figure-oor", "Out-of-range fractions over tau = 0.01..0.99");

    try {
        app.parse(argc, argv);

        // options bound straight into config were already written during parse;
        // snapshot them so explicit flags can win over the config file below
        const uqfi::ExperimentConfig from_flags = config;
        if (!config_path.empty())
            uqfi::apply_config_json(config_path, config,
                                    app.count("--out") ? nullptr : &out_dir);

        // flags override the config file
        if (app.count("--model") || config_path.empty()) config.model_id = parse_model(model_text);
        if (app.count("--error") || config_path.empty())
            config.error_law = uqfi::parse_error_law(error_text);
        if (app.count("--fitter") || config_path.empty()) {
            const int degree = config.fitter.basis.degree;
            config.fitter = uqfi::parse_fitter(fitter_text);
            config.fitter.basis.degree = degree;
        }
        if (app.count("--n")) config.n = from_flags.n;
        if (app.count("--p")) config.p = from_flags.p;
        if (app.count("--reps")) config.reps = from_flags.reps;
        if (app.count("--seed")) config.seed_base = from_flags.seed_base;
        if (app.count("--feature-seed")) config.feature_seed = from_flags.feature_seed;
        if (app.count("--rho")) config.rho = from_flags.rho;
        if (app.count("--alpha")) config.alpha = from_flags.alpha;
        if (app.count("--threads")) config.threads = from_flags.threads;
        if (app.count("--degree")) config.fitter.basis.degree = from_flags.fitter.basis.degree;
        if (app.count("--grid")) config.grid.taus = parse_grid(grid_text);
        if (app.count("--tau-n-rule")) config.tail.tau_n_exponent = tau_n_rule;
        if (app.count("--bandwidth")) {
            if (!(bandwidth > 0.0))
                throw uqfi::ValidationError("--bandwidth must be positive");
            config.kde.bandwidth = bandwidth;
        }
        if (app.count("--kernel")) config.kde.kernel = uqfi::parse_kernel(kernel_text);
        if (no_center) config.center_file_data = false;
        if (paper_scale) {
            config.paper_scale = true;
            if (app.count("--reps") == 0) config.reps = 500;
        }

        std::vector<std::string> written;
        if (app.got_subcommand(sub_simulate)) written = uqfi::cmd_simulate(config, out_dir);
        else if (app.got_subcommand(sub_importance))
            written = uqfi::cmd_importance(importance_data, config, out_dir);
        else if (app.got_subcommand(sub_prune))
            written = uqfi::cmd_prune(prune_data, config, out_dir);
        else if (app.got_subcommand(sub_replicate)) written = uqfi::cmd_replicate(config, out_dir);
        else if (app.got_subcommand(sub_figure)) written = uqfi::cmd_figure_oor(config, out_dir);

        for (const auto& path : written) std::cout << path << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << uqfi::error_json("CliParseError", e.what()) << std::endl;
        return 1;
    } catch (const uqfi::Error& e) {
        std::cerr << uqfi::error_json(error_kind(e), e.what()) << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << uqfi::error_json("InternalError", e.what()) << std::endl;
        return 1;
    }
}
