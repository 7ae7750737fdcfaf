#pragma once

#include <cstddef>
#include <vector>

#include "jointtemporal/types.hpp"

namespace jt {

/// The four pieces of the complete-data log-likelihood plus their sum.
/// Terms may be -infinity (infeasible state) but never NaN.
struct LogLikTerms {
  double longitudinal_attach = 0.0;
  double survival_attach = 0.0;
  double random_effects_prior = 0.0;
  double fixed_effects_prior = 0.0;
  double total = 0.0;
};

/// Sufficient statistics of the curved-exponential-family form of the
/// log-likelihood. s1..s3 are per-visit (flattened in record order), s4 and
/// s13..s16 per-patient, s5..s12 scalar.
struct SufficientStats {
  std::vector<double> s1;  // y^2
  std::vector<double> s2;  // y * curve
  std::vector<double> s3;  // curve^2
  std::vector<double> s4;  // per-patient survival log-likelihood
  double s5 = 0.0;         // g_tilde^2
  double s6 = 0.0;         // g_tilde
  double s7 = 0.0;         // v0_tilde^2
  double s8 = 0.0;         // v0_tilde
  double s9 = 0.0;         // nu_tilde^2
  double s10 = 0.0;        // nu_tilde
  double s11 = 0.0;        // rho_tilde^2
  double s12 = 0.0;        // rho_tilde
  std::vector<double> s13;  // tau^2
  std::vector<double> s14;  // tau
  std::vector<double> s15;  // xi^2
  std::vector<double> s16;  // xi

  std::size_t n_patients() const { return s4.size(); }
  std::size_t n_visits() const { return s1.size(); }

  /// Stochastic-approximation step: this += step * (target - this),
  /// elementwise. step = 1 makes this an exact copy of target.
  void approximate_towards(const SufficientStats& target, double step);
};

/// Patient/visit counts the scalar reconstruction needs.
struct StatCounts {
  std::size_t n_patients = 0;
  std::size_t n_visits = 0;
};

/// Gaussian log-density of the residuals of all visits. sigma comes from the
/// model parameters; everything else from z.
double longitudinal_attachment(const std::vector<PatientRecord>& records, const LatentState& z, double sigma);

/// Observed events contribute log hazard + log survival, censored ones log
/// survival only. An observed event at or below the reference latent age has
/// zero hazard and yields -infinity.
double survival_attachment(const std::vector<PatientRecord>& records, const LatentState& z);

/// Gaussian priors of the random effects: tau around t0, xi around 0.
double random_effects_prior(const std::vector<IndividualEffects>& individual, const PopulationParams& params);

/// Gaussian priors of the four latent fixed effects.
double fixed_effects_prior(const LatentFixedEffects& fixed, const PopulationParams& params, const Hyperparams& hyper);

LogLikTerms total_loglik(const std::vector<PatientRecord>& records, const LatentState& z,
                         const PopulationParams& params, const Hyperparams& hyper);

SufficientStats compute_stats(const std::vector<PatientRecord>& records, const LatentState& z);

/// Rebuilds the total log-likelihood from sufficient statistics alone.
/// xi_bar is the mean of the xi prior (0 under the identifiability
/// convention; the maximization exposes its freshly maximized value so the
/// update rules can be checked for stationarity before the overwrite).
double stats_to_loglik(const SufficientStats& stats, const PopulationParams& params, const Hyperparams& hyper,
                       const StatCounts& counts, double xi_bar = 0.0);

/// Output of one maximization step. params already carries the
/// identifiability convention (t0 = maximized mean of tau); xi_bar is the
/// maximized mean of xi that callers must subtract from every xi_i before
/// zeroing it.
struct MaximizationResult {
  PopulationParams params;
  double xi_bar = 0.0;
  bool variance_floored = false;
};

/// Closed-form update of theta from (stochastically averaged) statistics.
/// The noise variance divides by the total visit count and the random-effect
/// variances by the patient count -- the MLE denominators of the Gaussian
/// blocks whose sums range over visits and patients respectively.
/// Non-positive variance estimates are floored at variance_floor.
MaximizationResult maximization_step(const SufficientStats& stats, const StatCounts& counts,
                                     double variance_floor = 1e-9);

}  // namespace jt
