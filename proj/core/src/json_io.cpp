#include "uqfi/json_io.hpp"

#include <fstream>

#include <json.hpp>

#include "uqfi/errors.hpp"

namespace uqfi {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(path + ": invalid JSON: " + e.what());
    }
    return j;
}

void dump_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed while writing '" + path + "'");
}

json test_to_json(const QuantileTest& test) {
    return json{{"statistic", test.statistic},
                {"p_value", test.p_value},
                {"q_marginal", test.q_marginal},
                {"q_hat", test.q_hat},
                {"variance", test.variance}};
}

} // namespace

void write_meta_json(const DatasetMeta& meta, std::size_t n, std::size_t p,
                     const std::string& path) {
    json j{{"source", meta.source},
           {"model_id", meta.model_id},
           {"error_law", meta.error_law},
           {"feature_seed", meta.feature_seed},
           {"error_seed", meta.error_seed},
           {"rho", meta.rho},
           {"n", n},
           {"p", p}};
    dump_json(j, path);
}

DatasetMeta read_meta_json(const std::string& path) {
    json j = load_json(path);
    DatasetMeta meta;
    try {
        meta.source = j.at("source").get<std::string>();
        meta.model_id = j.at("model_id").get<int>();
        meta.error_law = j.at("error_law").get<std::string>();
        meta.feature_seed = j.at("feature_seed").get<std::uint64_t>();
        meta.error_seed = j.at("error_seed").get<std::uint64_t>();
        meta.rho = j.at("rho").get<double>();
    } catch (const json::exception& e) {
        throw IoError(path + ": bad provenance sidecar: " + e.what());
    }
    return meta;
}

void write_curve_json(const ImportanceCurve& curve, const std::string& path) {
    json beta = json::array();
    for (std::size_t k = 0; k < curve.k(); ++k) {
        json row = json::array();
        for (std::size_t j = 0; j < curve.p(); ++j) row.push_back(curve.beta(k, j));
        beta.push_back(std::move(row));
    }
    json j{{"taus", curve.taus},
           {"q_hat", curve.q_hat},
           {"f_y_at_q", curve.f_y_at_q},
           {"beta", std::move(beta)},
           {"pruned", curve.pruned},
           {"kept_set", curve.kept_set}};
    dump_json(j, path);
}

void write_pruning_json(const PruningReport& report, const std::string& path) {
    json per_tau = json::array();
    for (const auto& rec : report.per_tau) {
        json trace = json::array();
        for (const auto& step : rec.trace)
            trace.push_back(json{{"feature", step.feature},
                                 {"removed", step.removed},
                                 {"test", test_to_json(step.test)}});
        per_tau.push_back(json{{"tau", rec.tau},
                               {"gof", test_to_json(rec.gof)},
                               {"gof_passed", rec.gof_passed},
                               {"trace", std::move(trace)},
                               {"kept", rec.kept},
                               {"dropped", rec.dropped}});
    }
    json j{{"alpha", report.alpha},
           {"per_tau", std::move(per_tau)},
           {"final", json{{"kept", report.kept}, {"dropped", report.dropped}}}};
    dump_json(j, path);
}

void apply_config_json(const std::string& path, ExperimentConfig& config, std::string* out_dir) {
    json j = load_json(path);
    if (!j.is_object()) throw ValidationError(path + ": config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "model") {
                if (value.is_string()) {
                    if (value.get<std::string>() != "linear")
                        throw ValidationError("config 'model' string must be \"linear\"");
                    config.model_id = 0;
                } else {
                    config.model_id = value.get<int>();
                }
            } else if (key == "error") {
                config.error_law = parse_error_law(value.get<std::string>());
            } else if (key == "n") {
                config.n = value.get<std::size_t>();
            } else if (key == "p") {
                config.p = value.get<std::size_t>();
            } else if (key == "reps") {
                config.reps = value.get<std::size_t>();
            } else if (key == "seed") {
                config.seed_base = value.get<std::uint64_t>();
            } else if (key == "feature_seed") {
                config.feature_seed = value.get<std::uint64_t>();
            } else if (key == "rho") {
                config.rho = value.get<double>();
            } else if (key == "grid") {
                config.grid.taus = value.get<std::vector<double>>();
            } else if (key == "fitter") {
                const int degree = config.fitter.basis.degree;
                config.fitter = parse_fitter(value.get<std::string>());
                config.fitter.basis.degree = degree;
            } else if (key == "degree") {
                config.fitter.basis.degree = value.get<int>();
            } else if (key == "kernel") {
                config.kde.kernel = parse_kernel(value.get<std::string>());
            } else if (key == "alpha") {
                config.alpha = value.get<double>();
            } else if (key == "tau_n_rule") {
                config.tail.tau_n_exponent = value.get<double>();
            } else if (key == "bandwidth") {
                config.kde.bandwidth = value.get<double>();
            } else if (key == "threads") {
                config.threads = value.get<int>();
            } else if (key == "paper_scale") {
                config.paper_scale = value.get<bool>();
            } else if (key == "center") {
                config.center_file_data = value.get<bool>();
            } else if (key == "out") {
                // null pointer means --out was given on the command line and wins
                if (out_dir) *out_dir = value.get<std::string>();
            } else {
                throw ValidationError(path + ": unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError(path + ": bad config value: " + std::string(e.what()));
    }
}

std::string error_json(const std::string& type, const std::string& message) {
    return json{{"error", {{"type", type}, {"message", message}}}}.dump();
}

} // namespace uqfi
