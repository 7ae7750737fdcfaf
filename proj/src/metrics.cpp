#include "jointtemporal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

namespace jt {

namespace {

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": empty input");
}

double concordant_weight(double risk_a, double risk_b) {
  if (risk_a > risk_b) return 1.0;
  if (risk_a == risk_b) return 0.5;
  return 0.0;
}

}  // namespace

double relative_bias(const std::vector<double>& estimates, double truth) {
  require_nonempty(estimates.size(), "relative_bias");
  if (truth == 0.0) throw std::domain_error("relative_bias: truth must be nonzero");
  double acc = 0.0;
  for (double e : estimates) acc += (e - truth) / truth * 100.0;
  return acc / static_cast<double>(estimates.size());
}

double ree(double estimate, double truth) {
  if (truth == 0.0) throw std::domain_error("ree: truth must be nonzero");
  return (estimate - truth) / truth * 100.0;
}

double rrmse(const std::vector<double>& estimates, double truth) {
  require_nonempty(estimates.size(), "rrmse");
  if (truth == 0.0) throw std::domain_error("rrmse: truth must be nonzero");
  double acc = 0.0;
  for (double e : estimates) {
    const double r = (e - truth) / truth * 100.0;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(estimates.size()));
}

std::pair<double, double> empirical_se(const std::vector<double>& estimates) {
  if (estimates.size() < 2) throw std::invalid_argument("empirical_se: need at least two estimates");
  const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) /
                      static_cast<double>(estimates.size());
  double ss = 0.0;
  for (double e : estimates) ss += (e - mean) * (e - mean);
  const double se = std::sqrt(ss / static_cast<double>(estimates.size() - 1));
  return {se, se / mean};
}

std::pair<double, std::pair<double, double>> coverage_rate(
    const std::vector<std::pair<double, double>>& intervals, double truth) {
  require_nonempty(intervals.size(), "coverage_rate");
  std::size_t covered = 0;
  for (const auto& [lo, hi] : intervals) {
    if (!(lo <= hi)) throw std::invalid_argument("coverage_rate: interval bounds out of order");
    if (lo <= truth && truth <= hi) ++covered;
  }
  const double n = static_cast<double>(intervals.size());
  const double k = static_cast<double>(covered);
  const double rate = k / n * 100.0;
  // exact Clopper-Pearson bounds from Beta quantiles
  double lo = 0.0, hi = 1.0;
  if (covered > 0) lo = boost::math::quantile(boost::math::beta_distribution<double>(k, n - k + 1.0), 0.025);
  if (covered < intervals.size())
    hi = boost::math::quantile(boost::math::beta_distribution<double>(k + 1.0, n - k), 0.975);
  return {rate, {lo * 100.0, hi * 100.0}};
}

double icc(const std::vector<double>& estimated, const std::vector<double>& truth) {
  if (estimated.size() != truth.size()) throw std::invalid_argument("icc: length mismatch");
  if (estimated.size() < 2) throw std::invalid_argument("icc: need at least two subjects");
  const double n = static_cast<double>(estimated.size());
  constexpr double k = 2.0;  // two raters: estimate and truth

  double grand = 0.0;
  for (std::size_t i = 0; i < estimated.size(); ++i) grand += estimated[i] + truth[i];
  grand /= n * k;
  const double col_est = std::accumulate(estimated.begin(), estimated.end(), 0.0) / n;
  const double col_tru = std::accumulate(truth.begin(), truth.end(), 0.0) / n;

  double ss_rows = 0.0, ss_cols = 0.0, ss_err = 0.0;
  ss_cols = n * ((col_est - grand) * (col_est - grand) + (col_tru - grand) * (col_tru - grand));
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    const double row = (estimated[i] + truth[i]) / 2.0;
    ss_rows += k * (row - grand) * (row - grand);
    const double r_est = estimated[i] - row - col_est + grand;
    const double r_tru = truth[i] - row - col_tru + grand;
    ss_err += r_est * r_est + r_tru * r_tru;
  }
  const double msr = ss_rows / (n - 1.0);
  const double msc = ss_cols / (k - 1.0);
  const double mse = ss_err / ((n - 1.0) * (k - 1.0));
  const double denom = msr + (k - 1.0) * mse + k / n * (msc - mse);
  if (denom == 0.0) throw std::domain_error("icc: zero variance in both vectors");
  return (msr - mse) / denom;
}

double c_index(const std::vector<double>& risk_scores, const std::vector<double>& event_times,
               const std::vector<bool>& event_flags, double horizon) {
  const std::size_t n = risk_scores.size();
  if (event_times.size() != n || event_flags.size() != n)
    throw std::invalid_argument("c_index: input length mismatch");
  double concordant = 0.0;
  std::size_t comparable = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!event_flags[i] || event_times[i] > horizon) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (event_times[j] <= event_times[i]) continue;
      ++comparable;
      concordant += concordant_weight(risk_scores[i], risk_scores[j]);
    }
  }
  if (comparable == 0) throw std::domain_error("c_index: no comparable pairs");
  return concordant / static_cast<double>(comparable);
}

double censoring_km(const std::vector<double>& event_times, const std::vector<bool>& event_flags,
                    double time, bool left_limit) {
  const std::size_t n = event_times.size();
  if (event_flags.size() != n) throw std::invalid_argument("censoring_km: input length mismatch");
  // distinct times in increasing order
  std::vector<double> distinct(event_times);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  double surv = 1.0;
  for (double s : distinct) {
    if (left_limit ? (s >= time) : (s > time)) break;
    std::size_t at_risk = 0, censored_here = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (event_times[i] >= s) ++at_risk;
      if (event_times[i] == s && !event_flags[i]) ++censored_here;
    }
    surv *= 1.0 - static_cast<double>(censored_here) / static_cast<double>(at_risk);
  }
  return surv;
}

double cumulative_dynamic_auc(const std::vector<std::vector<double>>& survival_predictions,
                              const std::vector<double>& event_times, const std::vector<bool>& event_flags,
                              const std::vector<double>& times) {
  const std::size_t n = event_times.size();
  if (survival_predictions.size() != n || event_flags.size() != n)
    throw std::invalid_argument("cumulative_dynamic_auc: input length mismatch");
  require_nonempty(times.size(), "cumulative_dynamic_auc");

  double auc_sum = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t_eval = times[k];
    std::vector<std::size_t> cases, controls;
    for (std::size_t i = 0; i < n; ++i) {
      if (survival_predictions[i].size() != times.size())
        throw std::invalid_argument("cumulative_dynamic_auc: prediction row length mismatch");
      if (event_flags[i] && event_times[i] <= t_eval)
        cases.push_back(i);
      else if (event_times[i] > t_eval)
        controls.push_back(i);
    }
    if (cases.empty() || controls.empty())
      throw std::domain_error("cumulative_dynamic_auc: no cases or no controls at evaluation time");

    double weighted_pairs = 0.0, weighted_conc = 0.0;
    for (std::size_t i : cases) {
      const double g = censoring_km(event_times, event_flags, event_times[i], /*left_limit=*/true);
      if (g <= 0.0) throw std::domain_error("cumulative_dynamic_auc: censoring weight inestimable");
      const double w = 1.0 / g;
      const double risk_i = 1.0 - survival_predictions[i][k];
      for (std::size_t j : controls) {
        weighted_pairs += w;
        weighted_conc += w * concordant_weight(risk_i, 1.0 - survival_predictions[j][k]);
      }
    }
    auc_sum += weighted_conc / weighted_pairs;
  }
  return auc_sum / static_cast<double>(times.size());
}

double integrated_brier(const std::vector<std::vector<double>>& survival_predictions,
                        const std::vector<double>& grid, const std::vector<double>& event_times,
                        const std::vector<bool>& event_flags) {
  const std::size_t n = event_times.size();
  if (survival_predictions.size() != n || event_flags.size() != n)
    throw std::invalid_argument("integrated_brier: input length mismatch");
  if (grid.size() < 2) throw std::invalid_argument("integrated_brier: grid needs at least two points");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("integrated_brier: grid not increasing");

  std::vector<double> brier(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const double g_t = censoring_km(event_times, event_flags, t, /*left_limit=*/false);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (survival_predictions[i].size() != grid.size())
        throw std::invalid_argument("integrated_brier: prediction row length mismatch");
      const double s = survival_predictions[i][k];
      if (event_flags[i] && event_times[i] <= t) {
        const double g = censoring_km(event_times, event_flags, event_times[i], /*left_limit=*/true);
        if (g <= 0.0) throw std::domain_error("integrated_brier: censoring weight inestimable");
        acc += s * s / g;
      } else if (event_times[i] > t) {
        if (g_t <= 0.0) throw std::domain_error("integrated_brier: censoring weight inestimable");
        acc += (1.0 - s) * (1.0 - s) / g_t;
      }
      // censored before t: status unknown, contributes nothing
    }
    brier[k] = acc / static_cast<double>(n);
  }

  double integral = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    integral += 0.5 * (brier[k] + brier[k - 1]) * (grid[k] - grid[k - 1]);
  return integral / (grid.back() - grid.front());
}

std::pair<double, double> mae_mse(const std::vector<double>& predictions,
                                  const std::vector<double>& observations, double scale) {
  if (predictions.size() != observations.size()) throw std::invalid_argument("mae_mse: length mismatch");
  require_nonempty(predictions.size(), "mae_mse");
  double abs_acc = 0.0, sq_acc = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = (predictions[i] - observations[i]) * scale;
    abs_acc += std::abs(d);
    sq_acc += d * d;
  }
  const double n = static_cast<double>(predictions.size());
  return {abs_acc / n, sq_acc / n};
}

RecoveryReport recovery_report(const std::vector<std::string>& names,
                               const std::vector<std::vector<double>>& estimates,
                               const std::vector<double>& truths,
                               const std::vector<std::vector<double>>& standard_errors) {
  if (truths.size() != names.size()) throw std::invalid_argument("recovery_report: names/truths mismatch");
  require_nonempty(estimates.size(), "recovery_report");
  const std::size_t n_params = names.size();
  const std::size_t n_runs = estimates.size();
  const bool with_se = !standard_errors.empty();
  if (with_se && standard_errors.size() != n_runs)
    throw std::invalid_argument("recovery_report: standard_errors shape mismatch");

  RecoveryReport report;
  for (std::size_t p = 0; p < n_params; ++p) {
    std::vector<double> col(n_runs);
    for (std::size_t m = 0; m < n_runs; ++m) {
      if (estimates[m].size() != n_params) throw std::invalid_argument("recovery_report: estimate row mismatch");
      col[m] = estimates[m][p];
    }
    ParameterRecovery rec;
    rec.name = names[p];
    rec.relative_bias = relative_bias(col, truths[p]);
    rec.rrmse = rrmse(col, truths[p]);
    rec.ree.reserve(n_runs);
    for (double e : col) rec.ree.push_back(ree(e, truths[p]));
    if (n_runs >= 2) {
      auto [se, rse] = empirical_se(col);
      rec.se_empirical = se;
      rec.rse_empirical = rse;
    }
    if (with_se) {
      std::vector<std::pair<double, double>> intervals;
      intervals.reserve(n_runs);
      for (std::size_t m = 0; m < n_runs; ++m) {
        if (standard_errors[m].size() != n_params)
          throw std::invalid_argument("recovery_report: standard_errors row mismatch");
        const double half = 1.96 * standard_errors[m][p];
        intervals.emplace_back(col[m] - half, col[m] + half);
      }
      auto [rate, ci] = coverage_rate(intervals, truths[p]);
      rec.coverage_rate = rate;
      rec.coverage_ci = ci;
    }
    report.parameters.push_back(std::move(rec));
  }
  return report;
}

}  // namespace jt
