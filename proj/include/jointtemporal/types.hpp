#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace jt {

/// Per-patient random effects: log-rate factor and time shift (years).
struct IndividualEffects {
  double xi = 0.0;
  double tau = 0.0;
};

/// Fixed effects of the longitudinal logistic curve.
/// g shapes the curve (value at t0 is 1/(1+g)), v0 is the slope at t0,
/// t0 is the population reference time.
struct LongitudinalFixed {
  double g = 1.0;
  double v0 = 1.0;
  double t0 = 0.0;

  void validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::domain_error("LongitudinalFixed: g must be > 0");
    if (!(v0 > 0.0) || !std::isfinite(v0)) throw std::domain_error("LongitudinalFixed: v0 must be > 0");
    if (!std::isfinite(t0)) throw std::domain_error("LongitudinalFixed: t0 must be finite");
  }
};

/// Weibull survival fixed effects: scale nu (years) and shape rho.
struct SurvivalFixed {
  double nu = 1.0;
  double rho = 1.0;

  void validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::domain_error("SurvivalFixed: nu must be > 0");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::domain_error("SurvivalFixed: rho must be > 0");
  }
};

/// Sampled (latent) fixed effects on the unconstrained scale:
/// g_tilde = log g, v0_tilde = log v0, nu_tilde = -log nu, rho_tilde = log rho.
struct LatentFixedEffects {
  double g_tilde = 0.0;
  double v0_tilde = 0.0;
  double nu_tilde = 0.0;
  double rho_tilde = 0.0;

  static LatentFixedEffects from_natural(const LongitudinalFixed& lf, const SurvivalFixed& sf) {
    lf.validate();
    sf.validate();
    return {std::log(lf.g), std::log(lf.v0), -std::log(sf.nu), std::log(sf.rho)};
  }

  LongitudinalFixed longitudinal(double t0) const {
    return {std::exp(g_tilde), std::exp(v0_tilde), t0};
  }

  SurvivalFixed survival() const { return {std::exp(-nu_tilde), std::exp(rho_tilde)}; }
};

/// Maximized model parameters (theta). The mean of xi is pinned at 0 and t0
/// doubles as the mean time shift, so neither appears as a separate field.
struct PopulationParams {
  double sigma_tau = 1.0;
  double sigma_xi = 1.0;
  double t0 = 0.0;
  double mean_g_tilde = 0.0;
  double mean_v0_tilde = 0.0;
  double mean_nu_tilde = 0.0;
  double mean_rho_tilde = 0.0;
  double sigma = 0.1;

  void validate() const {
    if (!(sigma_tau > 0.0)) throw std::invalid_argument("PopulationParams: sigma_tau must be > 0");
    if (!(sigma_xi > 0.0)) throw std::invalid_argument("PopulationParams: sigma_xi must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("PopulationParams: sigma must be > 0");
    if (!std::isfinite(t0)) throw std::invalid_argument("PopulationParams: t0 must be finite");
    for (double m : {mean_g_tilde, mean_v0_tilde, mean_nu_tilde, mean_rho_tilde})
      if (!std::isfinite(m)) throw std::invalid_argument("PopulationParams: latent means must be finite");
  }
};

/// User-set prior standard deviations of the latent fixed effects.
struct Hyperparams {
  double sigma_g_tilde = 0.1;
  double sigma_v0_tilde = 0.1;
  double sigma_nu_tilde = 0.1;
  double sigma_rho_tilde = 0.1;

  void validate() const {
    for (double s : {sigma_g_tilde, sigma_v0_tilde, sigma_nu_tilde, sigma_rho_tilde})
      if (!(s > 0.0)) throw std::invalid_argument("Hyperparams: prior stds must be > 0");
  }
};

struct Visit {
  double time = 0.0;   // years
  double value = 0.0;  // normalized score in [0,1]
};

/// One patient: visits plus the (possibly censored) event.
/// When the event is censored the recorded time is the last visit time.
struct PatientRecord {
  std::string id;
  std::vector<Visit> visits;
  double event_time = 0.0;
  bool event_observed = false;

  std::size_t n_visits() const { return visits.size(); }

  void validate() const {
    if (visits.empty()) throw std::invalid_argument("PatientRecord " + id + ": no visits");
    double prev = -std::numeric_limits<double>::infinity();
    for (const Visit& v : visits) {
      if (!std::isfinite(v.time)) throw std::invalid_argument("PatientRecord " + id + ": non-finite visit time");
      if (!(v.time > prev)) throw std::invalid_argument("PatientRecord " + id + ": visit times not strictly increasing");
      if (!(v.value >= 0.0 && v.value <= 1.0))
        throw std::invalid_argument("PatientRecord " + id + ": score outside [0,1]");
      prev = v.time;
    }
    if (!std::isfinite(event_time)) throw std::invalid_argument("PatientRecord " + id + ": non-finite event time");
    if (event_time < visits.front().time)
      throw std::invalid_argument("PatientRecord " + id + ": event time precedes first visit");
  }
};

/// Full latent state z: sampled fixed effects plus per-patient random effects,
/// aligned with the record order of the dataset.
struct LatentState {
  LatentFixedEffects fixed;
  std::vector<IndividualEffects> individual;
};

inline std::size_t total_visits(const std::vector<PatientRecord>& records) {
  std::size_t n = 0;
  for (const auto& r : records) n += r.visits.size();
  return n;
}

}  // namespace jt
