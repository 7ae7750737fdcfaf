#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "jointtemporal/types.hpp"

namespace jt {

/// Cohort generator configuration. Defaults are the ALS-real-like simulation
/// preset (N=200, t0=5, Beta noise with concentration 100). Visit gaps are
/// given in months and converted internally.
struct SimConfig {
  std::size_t n_patients = 200;
  double sigma_tau = 1.04;
  double sigma_xi = 0.73;
  double t0 = 5.0;
  double v0 = 1.13;
  double g = 6.40;
  double nu = 3.62;
  double rho = 2.25;
  double delta_f_mean = 0.0;   // years from tau to baseline
  double delta_f_std = 0.4;
  double t_f_mean = 1.2;       // follow-up duration, years
  double t_f_std = 0.3;
  double delta_v_mean_months = 1.47;  // inter-visit gap
  double delta_v_std_months = 0.5;
  double beta_concentration = 100.0;
  bool noise_free = false;     // emit the exact curve value instead of Beta draws
  std::uint64_t seed = 1;

  LongitudinalFixed longitudinal() const { return {g, v0, t0}; }
  SurvivalFixed survival() const { return {nu, rho}; }

  void validate() const;
};

struct SimulatedCohort {
  std::vector<PatientRecord> records;
  std::vector<IndividualEffects> truth;  // aligned with records
};

/// Simulates a cohort under the joint model:
///   1. draw (xi, tau) per patient,
///   2. baseline visit at tau + delta_f,
///   3. visit grid with positive gaps until the follow-up horizon,
///   4. Beta outcomes with mode gamma0(psi) and the configured concentration,
///   5. Weibull event in latent time mapped back by exp(-xi) and shifted by tau,
///   6. visits after the event dropped; events past the last visit censored at
///      the last visit time.
/// Patients left with no visits are redrawn wholesale. Per-patient RNG streams
/// are derived from (seed, index), so generation is order-independent.
SimulatedCohort simulate_cohort(const SimConfig& config);

}  // namespace jt
