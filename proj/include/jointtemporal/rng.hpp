#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace jt {

/// Seeded RNG with hand-rolled distribution transforms. std::*_distribution
/// output is implementation-defined, so every draw here is built from raw
/// mt19937_64 words to keep results reproducible across standard libraries
/// and serializable for checkpointing.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  double uniform() {
    return (gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (no cached spare, so the state is just
  /// the engine state).
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Gamma(shape, 1) by Marsaglia-Tsang squeeze.
  double gamma(double shape);

  /// Beta(alpha, beta) from two gamma draws.
  double beta(double alpha, double beta_param);

  /// Beta parameterized by mode m in (0,1) and concentration p > 2:
  /// alpha = m(p-2)+1, beta = (1-m)(p-2)+1.
  double beta_mode_concentration(double mode, double concentration);

  /// Weibull(scale, shape) by inverse CDF.
  double weibull(double scale, double shape);

  /// Derives an independent stream seed from (seed, index); splitmix64 mix.
  static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index);

  /// Engine state as text (for checkpoints); round-trips exactly.
  std::string serialize() const;
  void deserialize(const std::string& state);

 private:
  std::mt19937_64 gen_;
};

}  // namespace jt
