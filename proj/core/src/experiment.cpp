#include "uqfi/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numeric>

#include "uqfi/csv_io.hpp"
#include "uqfi/errors.hpp"
#include "uqfi/json_io.hpp"
#include "uqfi/parallel.hpp"

namespace uqfi {

namespace {

namespace fs = std::filesystem;

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

BasisConfig with_default_interactions(BasisConfig basis, int model_id, bool enabled) {
    // models 4-8 contain an x1*x3 cross term; give the basis the matching
    // tensor-product block unless the caller configured interactions
    if (enabled && basis.interactions.empty() && model_id >= 4 && model_id <= 8)
        basis.interactions = {{0, 2}};
    return basis;
}

struct RepResult {
    bool ok = false;
    std::string error;
    ImportanceCurve curve;                 // pruned
    std::vector<std::size_t> dropped;      // final drop set
    std::vector<bool> gof_passed;          // per tau
    std::vector<std::size_t> init_nz;      // per tau, features j >= 3 (1-based)
    std::vector<std::size_t> final_nz;
};

std::size_t near_zero_nonzeros(const ImportanceCurve& curve, std::size_t k) {
    std::size_t count = 0;
    for (std::size_t j = 2; j < curve.p(); ++j) // features beyond the first two
        if (curve.beta(k, j) != 0.0) ++count;
    return count;
}

RepResult run_one_replication(const ExperimentConfig& config, std::size_t rep) {
    RepResult result;
    try {
        Dataset data = make_dataset(config, config.seed_base + rep);
        PredictorPtr predictor = fit_predictor(data, config.fitter);

        ImportanceOptions opts;
        opts.kde = config.kde;
        opts.tail = config.tail;
        opts.threads = 1; // reps already fan out across the pool
        ImportanceCurve curve = estimate_importance(data, *predictor, config.grid, opts);

        const std::size_t k = curve.k();
        result.init_nz.resize(k);
        for (std::size_t kk = 0; kk < k; ++kk)
            result.init_nz[kk] = near_zero_nonzeros(curve, kk);

        PruneConfig pcfg;
        pcfg.alpha = config.alpha;
        pcfg.grid = config.grid;
        PruningReport report = prune_multi(data, *predictor, curve, pcfg, config.kde);

        result.final_nz.resize(k);
        result.gof_passed.resize(k);
        for (std::size_t kk = 0; kk < k; ++kk) {
            result.final_nz[kk] = near_zero_nonzeros(curve, kk);
            result.gof_passed[kk] = report.per_tau[kk].gof_passed;
        }
        result.dropped = report.dropped;
        result.curve = std::move(curve);
        result.ok = true;
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    return result;
}

} // namespace

FitterSpec parse_fitter(const std::string& text) {
    FitterSpec spec;
    if (text == "ols") {
        spec.kind = FitterSpec::Kind::Ols;
    } else if (text == "poly") {
        spec.kind = FitterSpec::Kind::AdditivePoly;
    } else if (text == "mcp") {
        spec.kind = FitterSpec::Kind::McpAdditive;
    } else if (text.rfind("external:", 0) == 0) {
        spec.kind = FitterSpec::Kind::External;
        spec.external_path = text.substr(9);
        if (spec.external_path.empty())
            throw ValidationError("fitter 'external:' needs a predictions-file path");
    } else {
        throw ValidationError("unknown fitter '" + text +
                              "' (expected ols|poly|mcp|external:PATH)");
    }
    return spec;
}

std::string to_string(FitterSpec::Kind kind) {
    switch (kind) {
        case FitterSpec::Kind::Ols: return "ols";
        case FitterSpec::Kind::AdditivePoly: return "poly";
        case FitterSpec::Kind::McpAdditive: return "mcp";
        case FitterSpec::Kind::External: return "external";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (model_id < 0 || model_id > 9)
        throw ValidationError("model must be 0 (linear benchmark) or 1..9");
    if (n == 0) throw ValidationError("n must be positive");
    if (p == 0) throw ValidationError("p must be positive");
    if (reps == 0) throw ValidationError("reps must be >= 1");
    grid.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
    if (!(rho > -1.0 && rho < 1.0)) throw ValidationError("rho must lie in (-1,1)");
    if (fitter.kind == FitterSpec::Kind::External && fitter.external_path.empty())
        throw ValidationError("external fitter needs a predictions-file path");
    if (model_id >= 1 && p < 4)
        throw ValidationError("benchmark models 1..9 need p >= 4 (x1..x3 plus the noise "
                              "convention x4); got p=" + std::to_string(p));
    if (model_id == 0 && p < 2)
        throw ValidationError("the linear benchmark needs p >= 2");
}

Dataset make_dataset(const ExperimentConfig& config, std::uint64_t error_seed) {
    config.validate();
    FeatureSpec features;
    features.p = config.p;
    features.rho = config.rho;
    features.seed = config.feature_seed;
    if (config.model_id == 0)
        return generate_linear_benchmark(features, config.error_law, config.n, error_seed);
    ModelSpec model;
    model.id = config.model_id;
    return generate(model, features, config.error_law, config.n, error_seed);
}

PredictorPtr fit_predictor(const Dataset& data, const FitterSpec& fitter) {
    switch (fitter.kind) {
        case FitterSpec::Kind::Ols:
            return fit_ols(data);
        case FitterSpec::Kind::AdditivePoly: {
            BasisConfig basis = with_default_interactions(fitter.basis, data.meta.model_id,
                                                          fitter.auto_interactions);
            return fit_additive_poly(data, basis);
        }
        case FitterSpec::Kind::McpAdditive: {
            McpConfig mcp = fitter.mcp;
            mcp.basis = with_default_interactions(fitter.basis, data.meta.model_id,
                                                  fitter.auto_interactions);
            return fit_mcp_additive(data, mcp);
        }
        case FitterSpec::Kind::External: {
            ExternalPredictions preds =
                read_predictions_csv(fitter.external_path, data.n(), data.p());
            return wrap_external(data, std::move(preds));
        }
    }
    throw ValidationError("unhandled fitter kind");
}

ReplicationSummary run_replications(const ExperimentConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const std::size_t reps = config.reps;
    const std::size_t k = config.grid.size();
    const std::size_t p = config.p;

    std::vector<RepResult> results(reps);
    const int workers = resolve_threads(config.threads);
    for_chunks(reps, 1, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t r = begin; r < end; ++r) results[r] = run_one_replication(config, r);
    });

    ReplicationSummary summary;
    summary.taus = config.grid.taus;
    summary.p = p;
    summary.reps_requested = reps;
    summary.mean_beta = Matrix(k, p);
    summary.sd_beta = Matrix(k, p);
    summary.prun.assign(k, 0.0);
    summary.gof_pass_rate.assign(k, 0.0);

    std::vector<const RepResult*> done;
    for (std::size_t r = 0; r < reps; ++r) {
        if (results[r].ok) {
            done.push_back(&results[r]);
            summary.dropped_per_rep.push_back(results[r].dropped);
        } else {
            summary.failures.push_back("rep " + std::to_string(r) + " (error seed " +
                                       std::to_string(config.seed_base + r) +
                                       "): " + results[r].error);
        }
    }
    summary.reps_completed = done.size();
    if (done.empty())
        throw Error("all " + std::to_string(reps) +
                    " replications failed; first failure: " + summary.failures.front());

    const double m = static_cast<double>(done.size());
    for (std::size_t kk = 0; kk < k; ++kk) {
        for (std::size_t j = 0; j < p; ++j) {
            double mean = 0.0;
            for (const RepResult* r : done) mean += r->curve.beta(kk, j);
            mean /= m;
            double ss = 0.0;
            for (const RepResult* r : done) {
                double d = r->curve.beta(kk, j) - mean;
                ss += d * d;
            }
            summary.mean_beta(kk, j) = mean;
            summary.sd_beta(kk, j) = done.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
        }
        std::vector<std::size_t> init_nz, final_nz;
        for (const RepResult* r : done) {
            init_nz.push_back(r->init_nz[kk]);
            final_nz.push_back(r->final_nz[kk]);
        }
        summary.prun[kk] = p > 2 ? prun_metric(init_nz, final_nz, p, done.size()) : 0.0;
        double passes = 0.0;
        for (const RepResult* r : done) passes += r->gof_passed[kk] ? 1.0 : 0.0;
        summary.gof_pass_rate[kk] = passes / m;
    }
    if (done.size() < 2)
        std::cerr << "warning: single completed replication; sds reported as 0\n";

    summary.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

OorCurve run_figure_oor(const ExperimentConfig& config) {
    Dataset data = make_dataset(config, config.seed_base);
    PredictorPtr predictor = fit_predictor(data, config.fitter);
    OorCurve curve;
    for (int i = 1; i <= 99; ++i) {
        double tau = static_cast<double>(i) / 100.0;
        curve.taus.push_back(tau);
        curve.fractions.push_back(out_of_range_fraction(data, *predictor, tau));
    }
    return curve;
}

namespace {

/// Dataset loading for the file-driven subcommands: sidecar metadata when
/// present, centering policy for visibly uncentered feature columns.
Dataset load_cli_dataset(const std::string& data_path, const ExperimentConfig& config) {
    Dataset data = read_dataset_csv(data_path);

    fs::path sidecar = fs::path(data_path);
    sidecar.replace_extension(".meta.json");
    if (fs::exists(sidecar)) {
        DatasetMeta meta = read_meta_json(sidecar.string());
        meta.source = "file";
        data.meta = meta;
    }

    const std::size_t n = data.n();
    const std::size_t p = data.p();
    bool uncentered = false;
    std::vector<double> means(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += data.x(i, j);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = data.x(i, j) - mean;
            ss += d * d;
        }
        double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        means[j] = mean;
        if (std::fabs(mean) > 0.25 * std::max(sd, 1e-12)) uncentered = true;
    }
    if (uncentered) {
        if (config.fitter.kind == FitterSpec::Kind::External) {
            std::cerr << "warning: feature columns are not centered; zeroing a column acts "
                         "as zero imputation, not mean imputation (cannot center: external "
                         "predictions are keyed to the original rows)\n";
        } else if (config.center_file_data) {
            std::cerr << "warning: feature columns are not centered; centering them so that "
                         "pruning's zero imputation matches mean imputation (disable with "
                         "--no-center)\n";
            for (std::size_t j = 0; j < p; ++j)
                for (std::size_t i = 0; i < n; ++i) data.x(i, j) -= means[j];
        } else {
            std::cerr << "warning: feature columns are not centered and --no-center is set; "
                         "zeroing a column acts as zero imputation\n";
        }
    }
    return data;
}

} // namespace

std::vector<std::string> cmd_simulate(const ExperimentConfig& config,
                                      const std::string& out_dir) {
    config.validate();
    ensure_dir(out_dir);
    Dataset data = make_dataset(config, config.seed_base);
    std::string csv = join_path(out_dir, "dataset.csv");
    std::string meta = join_path(out_dir, "dataset.meta.json");
    write_dataset_csv(data, csv);
    write_meta_json(data.meta, data.n(), data.p(), meta);
    return {csv, meta};
}

std::vector<std::string> cmd_importance(const std::string& data_path,
                                        const ExperimentConfig& config,
                                        const std::string& out_dir) {
    ensure_dir(out_dir);
    Dataset data = load_cli_dataset(data_path, config);
    PredictorPtr predictor = fit_predictor(data, config.fitter);
    ImportanceOptions opts;
    opts.kde = config.kde;
    opts.tail = config.tail;
    opts.threads = config.threads;
    ImportanceCurve curve = estimate_importance(data, *predictor, config.grid, opts);

    std::string csv = join_path(out_dir, "curve.csv");
    std::string json = join_path(out_dir, "curve.json");
    write_curve_csv(curve, csv);
    write_curve_json(curve, json);
    return {csv, json};
}

std::vector<std::string> cmd_prune(const std::string& data_path,
                                   const ExperimentConfig& config,
                                   const std::string& out_dir) {
    ensure_dir(out_dir);
    Dataset data = load_cli_dataset(data_path, config);
    PredictorPtr predictor = fit_predictor(data, config.fitter);
    ImportanceOptions opts;
    opts.kde = config.kde;
    opts.tail = config.tail;
    opts.threads = config.threads;
    ImportanceCurve curve = estimate_importance(data, *predictor, config.grid, opts);

    PruneConfig pcfg;
    pcfg.alpha = config.alpha;
    pcfg.grid = config.grid;
    PruningReport report = prune_multi(data, *predictor, curve, pcfg, config.kde);

    std::string curve_csv = join_path(out_dir, "curve.csv");
    std::string curve_json = join_path(out_dir, "curve.json");
    std::string report_json = join_path(out_dir, "pruning.json");
    std::string report_csv = join_path(out_dir, "pruning.csv");
    write_curve_csv(curve, curve_csv);
    write_curve_json(curve, curve_json);
    write_pruning_json(report, report_json);
    write_pruning_csv(report, data.p(), report_csv);
    return {curve_csv, curve_json, report_json, report_csv};
}

std::vector<std::string> cmd_replicate(const ExperimentConfig& config,
                                       const std::string& out_dir) {
    ensure_dir(out_dir);
    ReplicationSummary summary = run_replications(config);
    for (const auto& f : summary.failures) std::cerr << "warning: " << f << "\n";
    std::string csv = join_path(out_dir, "summary.csv");
    write_summary_csv(summary, csv);
    return {csv};
}

std::vector<std::string> cmd_figure_oor(const ExperimentConfig& config,
                                        const std::string& out_dir) {
    config.validate();
    ensure_dir(out_dir);
    OorCurve curve = run_figure_oor(config);
    std::string csv = join_path(out_dir, "oor.csv");
    write_oor_csv(curve, csv);
    return {csv};
}

} // namespace uqfi
