#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uqfi/datagen.hpp"
#include "uqfi/dataset.hpp"
#include "uqfi/density.hpp"
#include "uqfi/fitters.hpp"
#include "uqfi/importance.hpp"
#include "uqfi/predictor.hpp"
#include "uqfi/pruning.hpp"

namespace uqfi {

struct FitterSpec {
    enum class Kind { Ols, AdditivePoly, McpAdditive, External };
    Kind kind = Kind::AdditivePoly;
    std::string external_path{};   // predictions CSV for Kind::External
    BasisConfig basis{};
    McpConfig mcp{};
    // When no interactions are configured, benchmark models 4-8 get the
    // (x1, x3) tensor-product block their outcome maps contain.
    bool auto_interactions = true;
};

/// Parse "ols" | "poly" | "mcp" | "external:PATH".
FitterSpec parse_fitter(const std::string& text);
std::string to_string(FitterSpec::Kind kind);

struct ExperimentConfig {
    int model_id = 1;              // 1..9 benchmark models, 0 = linear benchmark
    ErrorLaw error_law{};
    std::size_t n = 1000;
    std::size_t p = 4;
    std::size_t reps = 50;         // desk scale; --paper-scale restores 500
    std::uint64_t seed_base = 1;   // replication r draws errors with seed_base + r
    std::uint64_t feature_seed = 5;
    double rho = 0.5;
    QuantileGrid grid{};
    FitterSpec fitter{};
    double alpha = 0.05;
    KdeConfig kde{};
    TailConfig tail{};
    int threads = 1;
    bool paper_scale = false;
    bool center_file_data = true;  // center visibly uncentered file datasets

    void validate() const;
};

struct ReplicationSummary {
    std::vector<double> taus;
    std::size_t p = 0;
    std::size_t reps_requested = 0;
    std::size_t reps_completed = 0;
    Matrix mean_beta;   // K x p means of the pruned curves over completed reps
    Matrix sd_beta;     // K x p sample standard deviations
    std::vector<double> prun;           // per tau, percentage metric
    std::vector<double> gof_pass_rate;  // per tau
    std::vector<std::vector<std::size_t>> dropped_per_rep; // final drop set, completed reps
    std::vector<std::string> failures;  // one message per failed rep
    double seconds = 0.0;
};

struct OorCurve {
    std::vector<double> taus;
    std::vector<double> fractions;
};

/// One synthetic draw under the config (fixed feature seed, given error seed).
Dataset make_dataset(const ExperimentConfig& config, std::uint64_t error_seed);

/// Fit the configured predictor; applies the model-aware default interaction
/// block for the polynomial fitters.
PredictorPtr fit_predictor(const Dataset& data, const FitterSpec& fitter);

/// Replication harness: fixed features across reps, fresh errors per rep,
/// fit + importance + pruning, aggregate means/sds/prun.  Failed reps are
/// recorded and excluded.  Results do not depend on the thread count.
ReplicationSummary run_replications(const ExperimentConfig& config);

/// Out-of-range fractions of the residual-shift argument on tau = 0.01..0.99.
OorCurve run_figure_oor(const ExperimentConfig& config);

// CLI entry points.  Each writes its artifacts under out_dir and returns the
// list of files written.
std::vector<std::string> cmd_simulate(const ExperimentConfig& config,
                                      const std::string& out_dir);
std::vector<std::string> cmd_importance(const std::string& data_path,
                                        const ExperimentConfig& config,
                                        const std::string& out_dir);
std::vector<std::string> cmd_prune(const std::string& data_path,
                                   const ExperimentConfig& config,
                                   const std::string& out_dir);
std::vector<std::string> cmd_replicate(const ExperimentConfig& config,
                                       const std::string& out_dir);
std::vector<std::string> cmd_figure_oor(const ExperimentConfig& config,
                                        const std::string& out_dir);

} // namespace uqfi
