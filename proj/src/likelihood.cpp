#include "jointtemporal/likelihood.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "jointtemporal/model.hpp"

namespace jt {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

double gauss_logpdf(double x, double mean, double sd) {
  const double zr = (x - mean) / sd;
  return -kLogSqrt2Pi - std::log(sd) - 0.5 * zr * zr;
}

void check_alignment(const std::vector<PatientRecord>& records, const LatentState& z) {
  if (records.size() != z.individual.size())
    throw std::logic_error("latent state size does not match record count");
}

// Per-patient survival contribution: B * log h(t_e) + log S(t_e).
double patient_survival_term(const PatientRecord& rec, const IndividualEffects& eff, const SurvivalFixed& sx) {
  const double x = latent_offset(eff, rec.event_time);
  double term = log_survival_at_offset(sx, x);
  if (rec.event_observed) term += log_hazard_at_offset(eff.xi, sx, x);
  return term;
}

void sa_step(std::vector<double>& acc, const std::vector<double>& target, double step) {
  if (acc.size() != target.size()) throw std::logic_error("SufficientStats: accumulator shape mismatch");
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += step * (target[i] - acc[i]);
}

}  // namespace

void SufficientStats::approximate_towards(const SufficientStats& target, double step) {
  sa_step(s1, target.s1, step);
  sa_step(s2, target.s2, step);
  sa_step(s3, target.s3, step);
  sa_step(s4, target.s4, step);
  s5 += step * (target.s5 - s5);
  s6 += step * (target.s6 - s6);
  s7 += step * (target.s7 - s7);
  s8 += step * (target.s8 - s8);
  s9 += step * (target.s9 - s9);
  s10 += step * (target.s10 - s10);
  s11 += step * (target.s11 - s11);
  s12 += step * (target.s12 - s12);
  sa_step(s13, target.s13, step);
  sa_step(s14, target.s14, step);
  sa_step(s15, target.s15, step);
  sa_step(s16, target.s16, step);
}

double longitudinal_attachment(const std::vector<PatientRecord>& records, const LatentState& z, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("longitudinal_attachment: sigma must be > 0");
  check_alignment(records, z);
  const double g = std::exp(z.fixed.g_tilde);
  const double v0 = std::exp(z.fixed.v0_tilde);
  double total = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& eff = z.individual[i];
    for (const Visit& v : records[i].visits) {
      const double curve = curve_at_offset(g, v0, latent_offset(eff, v.time));
      total += gauss_logpdf(v.value, curve, sigma);
    }
  }
  return total;
}

double survival_attachment(const std::vector<PatientRecord>& records, const LatentState& z) {
  check_alignment(records, z);
  const SurvivalFixed sx = z.fixed.survival();
  double total = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i)
    total += patient_survival_term(records[i], z.individual[i], sx);
  return total;
}

double random_effects_prior(const std::vector<IndividualEffects>& individual, const PopulationParams& params) {
  if (!(params.sigma_tau > 0.0) || !(params.sigma_xi > 0.0))
    throw std::invalid_argument("random_effects_prior: stds must be > 0");
  double total = 0.0;
  for (const auto& eff : individual) {
    total += gauss_logpdf(eff.tau, params.t0, params.sigma_tau);
    total += gauss_logpdf(eff.xi, 0.0, params.sigma_xi);
  }
  return total;
}

double fixed_effects_prior(const LatentFixedEffects& fixed, const PopulationParams& params, const Hyperparams& hyper) {
  hyper.validate();
  return gauss_logpdf(fixed.g_tilde, params.mean_g_tilde, hyper.sigma_g_tilde) +
         gauss_logpdf(fixed.v0_tilde, params.mean_v0_tilde, hyper.sigma_v0_tilde) +
         gauss_logpdf(fixed.nu_tilde, params.mean_nu_tilde, hyper.sigma_nu_tilde) +
         gauss_logpdf(fixed.rho_tilde, params.mean_rho_tilde, hyper.sigma_rho_tilde);
}

LogLikTerms total_loglik(const std::vector<PatientRecord>& records, const LatentState& z,
                         const PopulationParams& params, const Hyperparams& hyper) {
  LogLikTerms terms;
  terms.longitudinal_attach = longitudinal_attachment(records, z, params.sigma);
  terms.survival_attach = survival_attachment(records, z);
  terms.random_effects_prior = random_effects_prior(z.individual, params);
  terms.fixed_effects_prior = fixed_effects_prior(z.fixed, params, hyper);
  terms.total = terms.longitudinal_attach + terms.survival_attach + terms.random_effects_prior +
                terms.fixed_effects_prior;
  return terms;
}

SufficientStats compute_stats(const std::vector<PatientRecord>& records, const LatentState& z) {
  check_alignment(records, z);
  SufficientStats s;
  const std::size_t nv = total_visits(records);
  s.s1.reserve(nv);
  s.s2.reserve(nv);
  s.s3.reserve(nv);
  s.s4.reserve(records.size());
  s.s13.reserve(records.size());
  s.s14.reserve(records.size());
  s.s15.reserve(records.size());
  s.s16.reserve(records.size());

  const double g = std::exp(z.fixed.g_tilde);
  const double v0 = std::exp(z.fixed.v0_tilde);
  const SurvivalFixed sx = z.fixed.survival();

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& eff = z.individual[i];
    for (const Visit& v : records[i].visits) {
      const double curve = curve_at_offset(g, v0, latent_offset(eff, v.time));
      s.s1.push_back(v.value * v.value);
      s.s2.push_back(v.value * curve);
      s.s3.push_back(curve * curve);
    }
    s.s4.push_back(patient_survival_term(records[i], eff, sx));
    s.s13.push_back(eff.tau * eff.tau);
    s.s14.push_back(eff.tau);
    s.s15.push_back(eff.xi * eff.xi);
    s.s16.push_back(eff.xi);
  }
  s.s5 = z.fixed.g_tilde * z.fixed.g_tilde;
  s.s6 = z.fixed.g_tilde;
  s.s7 = z.fixed.v0_tilde * z.fixed.v0_tilde;
  s.s8 = z.fixed.v0_tilde;
  s.s9 = z.fixed.nu_tilde * z.fixed.nu_tilde;
  s.s10 = z.fixed.nu_tilde;
  s.s11 = z.fixed.rho_tilde * z.fixed.rho_tilde;
  s.s12 = z.fixed.rho_tilde;
  return s;
}

double stats_to_loglik(const SufficientStats& stats, const PopulationParams& params, const Hyperparams& hyper,
                       const StatCounts& counts, double xi_bar) {
  params.validate();
  hyper.validate();
  if (stats.n_patients() != counts.n_patients || stats.n_visits() != counts.n_visits ||
      stats.s13.size() != counts.n_patients || stats.s14.size() != counts.n_patients ||
      stats.s15.size() != counts.n_patients || stats.s16.size() != counts.n_patients ||
      stats.s2.size() != counts.n_visits || stats.s3.size() != counts.n_visits)
    throw std::logic_error("stats_to_loglik: counts inconsistent with statistics");

  const double nvis = static_cast<double>(counts.n_visits);
  const double npat = static_cast<double>(counts.n_patients);
  auto sum = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };

  // longitudinal block: residual sum of squares expands as s1 - 2*s2 + s3
  double value = -nvis * (kLogSqrt2Pi + std::log(params.sigma)) -
                 (sum(stats.s1) - 2.0 * sum(stats.s2) + sum(stats.s3)) / (2.0 * params.sigma * params.sigma);
  // survival block
  value += sum(stats.s4);
  // latent fixed effects blocks
  auto scalar_block = [](double sq, double lin, double mean, double sd) {
    return -(kLogSqrt2Pi + std::log(sd)) - (sq - 2.0 * lin * mean + mean * mean) / (2.0 * sd * sd);
  };
  value += scalar_block(stats.s5, stats.s6, params.mean_g_tilde, hyper.sigma_g_tilde);
  value += scalar_block(stats.s7, stats.s8, params.mean_v0_tilde, hyper.sigma_v0_tilde);
  value += scalar_block(stats.s9, stats.s10, params.mean_nu_tilde, hyper.sigma_nu_tilde);
  value += scalar_block(stats.s11, stats.s12, params.mean_rho_tilde, hyper.sigma_rho_tilde);
  // random effects blocks (tau centered on t0, xi on xi_bar)
  value += -npat * (kLogSqrt2Pi + std::log(params.sigma_tau)) -
           (sum(stats.s13) - 2.0 * params.t0 * sum(stats.s14) + npat * params.t0 * params.t0) /
               (2.0 * params.sigma_tau * params.sigma_tau);
  value += -npat * (kLogSqrt2Pi + std::log(params.sigma_xi)) -
           (sum(stats.s15) - 2.0 * xi_bar * sum(stats.s16) + npat * xi_bar * xi_bar) /
               (2.0 * params.sigma_xi * params.sigma_xi);
  return value;
}

MaximizationResult maximization_step(const SufficientStats& stats, const StatCounts& counts,
                                     double variance_floor) {
  if (stats.n_patients() != counts.n_patients || stats.n_visits() != counts.n_visits)
    throw std::logic_error("maximization_step: counts inconsistent with statistics");
  if (counts.n_patients == 0) throw std::invalid_argument("maximization_step: no patients");
  if (counts.n_visits == 0) throw std::invalid_argument("maximization_step: no visits");

  const double nvis = static_cast<double>(counts.n_visits);
  const double npat = static_cast<double>(counts.n_patients);
  auto sum = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };

  MaximizationResult out;
  bool floored = false;
  auto floor_var = [&](double var) {
    if (var < variance_floor) {
      floored = true;
      return variance_floor;
    }
    return var;
  };

  const double rss = sum(stats.s1) - 2.0 * sum(stats.s2) + sum(stats.s3);
  out.params.sigma = std::sqrt(floor_var(rss / nvis));

  out.params.mean_g_tilde = stats.s6;
  out.params.mean_v0_tilde = stats.s8;
  out.params.mean_nu_tilde = stats.s10;
  out.params.mean_rho_tilde = stats.s12;

  const double tau_bar = sum(stats.s14) / npat;
  const double var_tau = (sum(stats.s13) - 2.0 * tau_bar * sum(stats.s14)) / npat + tau_bar * tau_bar;
  out.params.t0 = tau_bar;  // identifiability: t0 is the mean time shift
  out.params.sigma_tau = std::sqrt(floor_var(var_tau));

  out.xi_bar = sum(stats.s16) / npat;
  const double var_xi = (sum(stats.s15) - 2.0 * out.xi_bar * sum(stats.s16)) / npat + out.xi_bar * out.xi_bar;
  out.params.sigma_xi = std::sqrt(floor_var(var_xi));

  out.variance_floored = floored;
  return out;
}

}  // namespace jt
