#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jt {

/// Recovery metrics of one parameter over M replicated fits.
struct ParameterRecovery {
  std::string name;
  double relative_bias = 0.0;          // percent
  double rrmse = 0.0;                  // percent
  std::vector<double> ree;             // percent, one per replicate
  double se_empirical = 0.0;
  double rse_empirical = 0.0;          // se / mean estimate
  std::optional<double> coverage_rate;         // percent
  std::optional<std::pair<double, double>> coverage_ci;  // Clopper-Pearson 95%, percent
};

struct RecoveryReport {
  std::vector<ParameterRecovery> parameters;
  std::optional<double> icc_tau;
  std::optional<double> icc_xi;
};

struct PredictionReport {
  double mae = 0.0;  // raw-score units
  double mse = 0.0;
  std::vector<std::pair<double, double>> c_index;  // (horizon, value)
  double mean_cumulative_auc = 0.0;
  double ibs = 0.0;
};

/// (1/M) sum (est - truth)/truth * 100.
double relative_bias(const std::vector<double>& estimates, double truth);

/// sqrt((1/M) sum ((est - truth)/truth * 100)^2); RRMSE^2 = mean(REE^2).
double rrmse(const std::vector<double>& estimates, double truth);

/// (est - truth)/truth * 100 for a single estimate.
double ree(double estimate, double truth);

/// Sample standard deviation of the estimates and its ratio to their mean.
std::pair<double, double> empirical_se(const std::vector<double>& estimates);

/// Fraction (percent) of intervals containing the truth, with the exact
/// Clopper-Pearson 95% CI (percent).
std::pair<double, std::pair<double, double>> coverage_rate(
    const std::vector<std::pair<double, double>>& intervals, double truth);

/// Two-way absolute-agreement single-measure intraclass correlation,
/// ICC(2,1), between estimated and true individual values.
double icc(const std::vector<double>& estimated, const std::vector<double>& truth);

/// Harrell-style concordance truncated at the horizon: pairs are anchored on
/// observed events with time <= horizon and compared against every subject
/// with a strictly later time; risk ties count 0.5.
double c_index(const std::vector<double>& risk_scores, const std::vector<double>& event_times,
               const std::vector<bool>& event_flags, double horizon);

/// IPCW cumulative/dynamic AUC averaged over the evaluation times.
/// survival_predictions[i][k] is patient i's predicted survival at times[k];
/// risk is 1 - survival. Throws when censoring weights are inestimable.
double cumulative_dynamic_auc(const std::vector<std::vector<double>>& survival_predictions,
                              const std::vector<double>& event_times, const std::vector<bool>& event_flags,
                              const std::vector<double>& times);

/// IPCW Brier score integrated by trapezoid over the grid.
/// survival_predictions[i][k] is patient i's predicted survival at grid[k].
double integrated_brier(const std::vector<std::vector<double>>& survival_predictions,
                        const std::vector<double>& grid, const std::vector<double>& event_times,
                        const std::vector<bool>& event_flags);

/// Mean absolute and mean squared error after rescaling normalized scores by
/// the raw-scale factor.
std::pair<double, double> mae_mse(const std::vector<double>& predictions,
                                  const std::vector<double>& observations, double scale);

/// Kaplan-Meier estimate of the censoring survival function, evaluated with a
/// left limit at `time` when `left_limit` is set (weights of observed events
/// use G(t-)).
double censoring_km(const std::vector<double>& event_times, const std::vector<bool>& event_flags,
                    double time, bool left_limit);

/// Recovery table over M replicated fits. estimates[m][p] pairs with
/// truths[p]; optional per-replicate standard errors enable coverage via
/// est +- 1.96*se intervals.
RecoveryReport recovery_report(const std::vector<std::string>& names,
                               const std::vector<std::vector<double>>& estimates,
                               const std::vector<double>& truths,
                               const std::vector<std::vector<double>>& standard_errors = {});

}  // namespace jt
