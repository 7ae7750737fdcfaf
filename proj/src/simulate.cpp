#include "jointtemporal/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "jointtemporal/model.hpp"
#include "jointtemporal/rng.hpp"

namespace jt {

namespace {

constexpr double kMinGapYears = 1.0 / 365.25;  // visit gaps floored at one day
constexpr double kScoreEps = 1e-12;            // keep outcomes strictly inside (0,1)

std::string patient_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "sim-%04zu", index);
  return buf;
}

// One attempt at generating a patient; returns false when every visit falls
// after the event and the caller must redraw.
bool generate_patient(const SimConfig& cfg, Rng& rng, PatientRecord& rec, IndividualEffects& eff) {
  eff.xi = rng.normal(0.0, cfg.sigma_xi);
  eff.tau = rng.normal(cfg.t0, cfg.sigma_tau);

  const double baseline = eff.tau + rng.normal(cfg.delta_f_mean, cfg.delta_f_std);
  const double follow_up = rng.normal(cfg.t_f_mean, cfg.t_f_std);
  const double horizon = baseline + follow_up;

  std::vector<double> times{baseline};
  for (;;) {
    double gap;
    do {
      gap = rng.normal(cfg.delta_v_mean_months, cfg.delta_v_std_months) / 12.0;
    } while (gap < kMinGapYears);
    const double next = times.back() + gap;
    if (next > horizon) break;
    times.push_back(next);
  }

  // event in latent time, mapped back to chronological age
  const double event = std::exp(-eff.xi) * rng.weibull(cfg.nu, cfg.rho) + eff.tau;

  // the event stops the follow-up; the follow-up censors the event
  std::vector<double> kept;
  for (double t : times)
    if (t <= event) kept.push_back(t);
  if (kept.empty()) return false;

  rec.visits.clear();
  const LongitudinalFixed lf = cfg.longitudinal();
  for (double t : kept) {
    const double mode = curve_at_offset(lf.g, lf.v0, latent_offset(eff, t));
    double y;
    if (cfg.noise_free) {
      y = mode;
    } else {
      const double m = std::clamp(mode, kScoreEps, 1.0 - kScoreEps);
      y = rng.beta_mode_concentration(m, cfg.beta_concentration);
      y = std::clamp(y, kScoreEps, 1.0 - kScoreEps);
    }
    rec.visits.push_back({t, y});
  }

  if (event > kept.back()) {
    rec.event_time = kept.back();
    rec.event_observed = false;
  } else {
    rec.event_time = event;
    rec.event_observed = true;
  }
  return true;
}

}  // namespace

void SimConfig::validate() const {
  if (n_patients < 1) throw std::invalid_argument("SimConfig: n_patients must be >= 1");
  if (!(sigma_tau >= 0.0) || !(sigma_xi >= 0.0) || !(delta_f_std >= 0.0) || !(t_f_std >= 0.0) ||
      !(delta_v_std_months >= 0.0))
    throw std::invalid_argument("SimConfig: stds must be >= 0");
  if (!noise_free && !(beta_concentration > 2.0))
    throw std::invalid_argument("SimConfig: beta_concentration must be > 2");
  longitudinal().validate();
  survival().validate();
  if (!(delta_v_mean_months > 0.0)) throw std::invalid_argument("SimConfig: mean visit gap must be > 0");
  if (!(t_f_mean > 0.0)) throw std::invalid_argument("SimConfig: mean follow-up must be > 0");
}

SimulatedCohort simulate_cohort(const SimConfig& config) {
  config.validate();
  SimulatedCohort cohort;
  cohort.records.resize(config.n_patients);
  cohort.truth.resize(config.n_patients);
  for (std::size_t i = 0; i < config.n_patients; ++i) {
    Rng rng(Rng::derive_stream(config.seed, i));
    PatientRecord& rec = cohort.records[i];
    rec.id = patient_id(i);
    while (!generate_patient(config, rng, rec, cohort.truth[i])) {
    }
    rec.validate();
  }
  return cohort;
}

}  // namespace jt
