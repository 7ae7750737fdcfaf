#pragma once

#include "jointtemporal/types.hpp"

namespace jt {

/// Latent disease age: psi(t) = exp(xi) * (t - tau) + t0.
double latent_age(const IndividualEffects& effects, double t0, double t);

/// exp(xi) * (t - tau), i.e. psi(t) - t0. The curve, survival and hazard all
/// depend on time only through this offset, which is why t0 cancels out of
/// every data-attachment term.
inline double latent_offset(const IndividualEffects& effects, double t) {
  return std::exp(effects.xi) * (t - effects.tau);
}

/// Logistic curve value at latent age psi, strictly in (0,1).
/// Equals 1/(1+g) at psi = t0.
double logistic_curve(const LongitudinalFixed& fx, double psi);

/// Same curve evaluated at offset x = psi - t0.
double curve_at_offset(double g, double v0, double x);

/// Survival probability at latent age psi: exp(-((psi-t0)/nu)^rho) for
/// psi > t0, and 1 otherwise.
double survival(const SurvivalFixed& sx, double t0, double psi);

/// log of the above; 0 for psi <= t0. Computed directly to avoid underflow.
double log_survival_at_offset(const SurvivalFixed& sx, double x);

/// Instantaneous hazard in chronological time:
/// rho*exp(xi)/nu * ((psi(t)-t0)/nu)^(rho-1) when psi(t) > t0, else 0.
/// For rho < 1 the hazard diverges as psi -> t0+; at psi == t0 exactly the
/// positive-infinity limit is returned as a sentinel.
double hazard(const IndividualEffects& effects, const SurvivalFixed& sx, double t0, double t);

/// log hazard at offset x = psi - t0; -infinity when x <= 0 (used by the
/// survival attachment, where an observed event below the reference time has
/// zero likelihood).
double log_hazard_at_offset(double xi, const SurvivalFixed& sx, double x);

}  // namespace jt
