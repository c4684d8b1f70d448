#pragma once

#include <string>
#include <vector>

#include "uqfi/dataset.hpp"
#include "uqfi/experiment.hpp"
#include "uqfi/importance.hpp"
#include "uqfi/predictor.hpp"

namespace uqfi {

// All CSVs use '.' as the decimal separator regardless of locale, and write
// doubles with the shortest representation that parses back bit-exactly.

/// Dataset schema: header "y,x1,...,xp".
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

/// External model outputs: header "yhat,g1,...,gp", one row per dataset row.
ExternalPredictions read_predictions_csv(const std::string& path, std::size_t n,
                                         std::size_t p);
void write_predictions_csv(const ExternalPredictions& preds, const std::string& path);

/// Curve schema: header "tau,q_hat,f_y_at_q,beta_1,...,beta_p".
void write_curve_csv(const ImportanceCurve& curve, const std::string& path);
ImportanceCurve read_curve_csv(const std::string& path);

/// Replication table, rows = tau: header
/// "tau,mean_beta1,sd_beta1,...,mean_betap,sd_betap,prun,gof_pass_rate,
///  reps_completed,reps_failed".
void write_summary_csv(const ReplicationSummary& summary, const std::string& path);
ReplicationSummary read_summary_csv(const std::string& path);

/// Out-of-range figure data: header "tau,fraction".
void write_oor_csv(const OorCurve& curve, const std::string& path);
OorCurve read_oor_csv(const std::string& path);

/// Kept/dropped matrix: header "feature,tau_<t1>,...,tau_<tK>,final".
void write_pruning_csv(const PruningReport& report, std::size_t p, const std::string& path);

} // namespace uqfi
