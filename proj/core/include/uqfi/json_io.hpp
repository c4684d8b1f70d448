#pragma once

#include <string>

#include "uqfi/dataset.hpp"
#include "uqfi/experiment.hpp"
#include "uqfi/importance.hpp"
#include "uqfi/pruning.hpp"

namespace uqfi {

/// Provenance sidecar written next to every simulated dataset.
void write_meta_json(const DatasetMeta& meta, std::size_t n, std::size_t p,
                     const std::string& path);
DatasetMeta read_meta_json(const std::string& path);

/// Curve with density diagnostics (q_hat, f_y_at_q, pruned state, kept set).
void write_curve_json(const ImportanceCurve& curve, const std::string& path);

/// Full pruning trace: gate results and per-feature tests at every tau.
void write_pruning_json(const PruningReport& report, const std::string& path);

/// Overlay config values from a JSON file whose keys mirror the CLI flags;
/// unknown keys are an error.  A config "out" key lands in *out_dir; pass
/// nullptr to ignore it (an explicit --out flag takes precedence).
void apply_config_json(const std::string& path, ExperimentConfig& config,
                       std::string* out_dir = nullptr);

/// Machine-readable error payload emitted on stderr by the CLI.
std::string error_json(const std::string& type, const std::string& message);

} // namespace uqfi
