#include "jointtemporal/model.hpp"

#include <cmath>
#include <limits>

namespace jt {

namespace {
// IEEE double overflows past exp(709); clamping the logistic exponent
// saturates the curve to its asymptote instead.
constexpr double kExpClamp = 700.0;
}  // namespace

double latent_age(const IndividualEffects& effects, double t0, double t) {
  if (!std::isfinite(effects.xi) || !std::isfinite(effects.tau) || !std::isfinite(t0) || !std::isfinite(t))
    throw std::domain_error("latent_age: non-finite input");
  return std::exp(effects.xi) * (t - effects.tau) + t0;
}

double curve_at_offset(double g, double v0, double x) {
  double arg = -v0 * (g + 1.0) * (g + 1.0) / g * x;
  if (arg > kExpClamp) arg = kExpClamp;
  if (arg < -kExpClamp) arg = -kExpClamp;
  return 1.0 / (1.0 + g * std::exp(arg));
}

double logistic_curve(const LongitudinalFixed& fx, double psi) {
  fx.validate();
  return curve_at_offset(fx.g, fx.v0, psi - fx.t0);
}

double log_survival_at_offset(const SurvivalFixed& sx, double x) {
  if (x <= 0.0) return 0.0;
  return -std::pow(x / sx.nu, sx.rho);
}

double survival(const SurvivalFixed& sx, double t0, double psi) {
  sx.validate();
  return std::exp(log_survival_at_offset(sx, psi - t0));
}

double log_hazard_at_offset(double xi, const SurvivalFixed& sx, double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(sx.rho) + xi - std::log(sx.nu) + (sx.rho - 1.0) * std::log(x / sx.nu);
}

double hazard(const IndividualEffects& effects, const SurvivalFixed& sx, double t0, double t) {
  sx.validate();
  const double x = latent_age(effects, t0, t) - t0;
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (sx.rho < 1.0) return std::numeric_limits<double>::infinity();  // singular limit
    return 0.0;
  }
  return sx.rho * std::exp(effects.xi) / sx.nu * std::pow(x / sx.nu, sx.rho - 1.0);
}

}  // namespace jt
