#include "jointtemporal/rng.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace jt {

double Rng::normal() {
  // u1 in (0,1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("Rng::gamma: shape must be > 0");
  if (shape < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    const double u = 1.0 - uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double alpha, double beta_param) {
  const double x = gamma(alpha);
  const double y = gamma(beta_param);
  return x / (x + y);
}

double Rng::beta_mode_concentration(double mode, double concentration) {
  if (!(concentration > 2.0)) throw std::domain_error("Rng::beta_mode_concentration: concentration must be > 2");
  if (!(mode > 0.0 && mode < 1.0)) throw std::domain_error("Rng::beta_mode_concentration: mode must be in (0,1)");
  const double a = mode * (concentration - 2.0) + 1.0;
  const double b = (1.0 - mode) * (concentration - 2.0) + 1.0;
  return beta(a, b);
}

double Rng::weibull(double scale, double shape) {
  const double u = 1.0 - uniform();
  return scale * std::pow(-std::log(u), 1.0 / shape);
}

std::uint64_t Rng::derive_stream(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 on seed + golden-ratio stride
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string Rng::serialize() const {
  std::ostringstream os;
  os << gen_;
  return os.str();
}

void Rng::deserialize(const std::string& state) {
  std::istringstream is(state);
  is >> gen_;
  if (is.fail()) throw std::invalid_argument("Rng::deserialize: malformed state");
}

}  // namespace jt
