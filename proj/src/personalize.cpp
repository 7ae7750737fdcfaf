#include "jointtemporal/personalize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "jointtemporal/model.hpp"
#include "jointtemporal/rng.hpp"

namespace jt {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

struct Objective {
  const PatientRecord* record;
  std::size_t k;
  const FittedModel* fitted;
  LongitudinalFixed lf;
  SurvivalFixed sx;
  mutable std::size_t evals = 0;

  double operator()(const IndividualEffects& eff) const {
    ++evals;
    const double sigma = fitted->params.sigma;
    double value = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const Visit& v = record->visits[j];
      const double curve = curve_at_offset(lf.g, lf.v0, latent_offset(eff, v.time));
      const double zr = (v.value - curve) / sigma;
      value += -kLogSqrt2Pi - std::log(sigma) - 0.5 * zr * zr;
    }
    // event censored at the last used visit: survival term only, never -inf
    const double t_last = record->visits[k - 1].time;
    value += log_survival_at_offset(sx, latent_offset(eff, t_last));
    // random-effects prior
    const double zt = (eff.tau - fitted->params.t0) / fitted->params.sigma_tau;
    const double zx = eff.xi / fitted->params.sigma_xi;
    value += -kLogSqrt2Pi - std::log(fitted->params.sigma_tau) - 0.5 * zt * zt;
    value += -kLogSqrt2Pi - std::log(fitted->params.sigma_xi) - 0.5 * zx * zx;
    return value;
  }
};

// Minimal 2-D Nelder-Mead on the negated objective. Deterministic.
struct SimplexResult {
  IndividualEffects best;
  double value = 0.0;  // maximized objective
  bool tol_reached = false;
};

SimplexResult nelder_mead(const Objective& f, IndividualEffects start, double step_xi, double step_tau,
                          double tol, std::size_t max_evals) {
  using Point = std::array<double, 2>;  // (xi, tau)
  auto eval = [&](const Point& p) { return -f({p[0], p[1]}); };

  std::array<Point, 3> simplex{Point{start.xi, start.tau},
                               Point{start.xi + step_xi, start.tau},
                               Point{start.xi, start.tau + step_tau}};
  std::array<double, 3> fv{eval(simplex[0]), eval(simplex[1]), eval(simplex[2])};

  auto order = [&]() {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::array<Point, 3> sp;
    std::array<double, 3> sf;
    for (int i = 0; i < 3; ++i) {
      sp[i] = simplex[idx[i]];
      sf[i] = fv[idx[i]];
    }
    simplex = sp;
    fv = sf;
  };

  bool tol_reached = false;
  while (f.evals < max_evals) {
    order();
    if (std::abs(fv[2] - fv[0]) <= tol * (1.0 + std::abs(fv[0]))) {
      tol_reached = true;
      break;
    }
    const Point centroid{(simplex[0][0] + simplex[1][0]) / 2.0, (simplex[0][1] + simplex[1][1]) / 2.0};
    auto along = [&](double coef) {
      return Point{centroid[0] + coef * (centroid[0] - simplex[2][0]),
                   centroid[1] + coef * (centroid[1] - simplex[2][1])};
    };
    const Point refl = along(1.0);
    const double f_refl = eval(refl);
    if (f_refl < fv[0]) {
      const Point exp_p = along(2.0);
      const double f_exp = eval(exp_p);
      if (f_exp < f_refl) {
        simplex[2] = exp_p;
        fv[2] = f_exp;
      } else {
        simplex[2] = refl;
        fv[2] = f_refl;
      }
    } else if (f_refl < fv[1]) {
      simplex[2] = refl;
      fv[2] = f_refl;
    } else {
      const Point contr = along(f_refl < fv[2] ? 0.5 : -0.5);
      const double f_contr = eval(contr);
      if (f_contr < std::min(f_refl, fv[2])) {
        simplex[2] = contr;
        fv[2] = f_contr;
      } else {
        // shrink towards the best vertex
        for (int i = 1; i < 3; ++i) {
          simplex[i] = {simplex[0][0] + 0.5 * (simplex[i][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[i][1] - simplex[0][1])};
          fv[i] = eval(simplex[i]);
        }
      }
    }
  }
  order();
  return {{simplex[0][0], simplex[0][1]}, -fv[0], tol_reached};
}

// Inverts the logistic curve to place the patient's mean observation at the
// matching latent offset, assuming xi = 0.
IndividualEffects moment_guess(const PatientRecord& record, std::size_t k, const FittedModel& fitted) {
  const LongitudinalFixed lf = fitted.latent_fixed.longitudinal(fitted.params.t0);
  double mean_y = 0.0, mean_t = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    mean_y += record.visits[j].value;
    mean_t += record.visits[j].time;
  }
  mean_y = std::clamp(mean_y / static_cast<double>(k), 0.02, 0.98);
  mean_t /= static_cast<double>(k);
  const double c = lf.v0 * (lf.g + 1.0) * (lf.g + 1.0) / lf.g;
  const double offset = -std::log((1.0 / mean_y - 1.0) / lf.g) / c;  // psi* - t0
  return {0.0, mean_t - offset};
}

bool gradient_stationary(const Objective& f, const IndividualEffects& eff, double best, double tol) {
  const double h = 1e-5;
  const double dxi = (f({eff.xi + h, eff.tau}) - f({eff.xi - h, eff.tau})) / (2.0 * h);
  const double dtau = (f({eff.xi, eff.tau + h}) - f({eff.xi, eff.tau - h})) / (2.0 * h);
  const double scale = 1.0 + std::abs(best);
  return std::abs(dxi) <= tol * scale && std::abs(dtau) <= tol * scale;
}

}  // namespace

double map_objective(const PatientRecord& record, std::size_t k_visits, const FittedModel& fitted,
                     const IndividualEffects& effects) {
  const std::size_t k = k_visits == 0 ? record.visits.size() : std::min(k_visits, record.visits.size());
  if (k == 0) throw std::invalid_argument("map_objective: patient has no visits");
  Objective f{&record, k, &fitted, fitted.latent_fixed.longitudinal(fitted.params.t0),
              fitted.latent_fixed.survival()};
  return f(effects);
}

PersonalizationResult personalize(const PatientRecord& record, const FittedModel& fitted,
                                  const PersonalizeOptions& options,
                                  const std::optional<IndividualEffects>& warm_start) {
  record.validate();
  fitted.params.validate();
  const std::size_t k =
      options.k_visits == 0 ? record.visits.size() : std::min(options.k_visits, record.visits.size());

  Objective f{&record, k, &fitted, fitted.latent_fixed.longitudinal(fitted.params.t0),
              fitted.latent_fixed.survival()};

  std::vector<IndividualEffects> starts;
  starts.push_back({0.0, fitted.params.t0});  // prior mode
  starts.push_back(moment_guess(record, k, fitted));
  if (warm_start) starts.push_back(*warm_start);

  SimplexResult best{};
  bool have_best = false;
  for (const auto& s : starts) {
    SimplexResult r = nelder_mead(f, s, 0.25, 0.5, options.objective_tol, options.max_evals);
    if (!have_best || r.value > best.value) {
      best = r;
      have_best = true;
    }
  }

  // one seeded jittered restart if the polish is not stationary yet
  if (!gradient_stationary(f, best.best, best.value, options.gradient_tol)) {
    Rng rng(Rng::derive_stream(options.seed, std::hash<std::string>{}(record.id)));
    IndividualEffects jittered{best.best.xi + 0.05 * rng.normal(), best.best.tau + 0.1 * rng.normal()};
    SimplexResult r = nelder_mead(f, jittered, 0.05, 0.1, options.objective_tol, options.max_evals);
    if (r.value > best.value) best = r;
  }

  PersonalizationResult out;
  out.effects = best.best;
  out.map_objective = best.value;
  out.n_evals = f.evals;
  out.converged = best.tol_reached && gradient_stationary(f, best.best, best.value, options.gradient_tol);
  out.t_last_visit = record.visits[k - 1].time;
  return out;
}

std::vector<PersonalizationResult> personalize_all(const std::vector<PatientRecord>& records,
                                                   const FittedModel& fitted,
                                                   const PersonalizeOptions& options, std::size_t n_threads) {
  std::vector<PersonalizationResult> results(records.size());
  if (n_threads <= 1 || records.size() < 2) {
    std::optional<IndividualEffects> warm;
    for (std::size_t i = 0; i < records.size(); ++i) {
      results[i] = personalize(records[i], fitted, options, warm);
      warm = results[i].effects;
    }
    return results;
  }
  const std::size_t workers = std::min<std::size_t>(n_threads, records.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      // contiguous partition so warm starts stay deterministic per worker
      const std::size_t lo = records.size() * w / workers;
      const std::size_t hi = records.size() * (w + 1) / workers;
      std::optional<IndividualEffects> warm;
      for (std::size_t i = lo; i < hi; ++i) {
        results[i] = personalize(records[i], fitted, options, warm);
        warm = results[i].effects;
      }
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

std::vector<double> predict_longitudinal(const IndividualEffects& effects, const FittedModel& fitted,
                                         const std::vector<double>& times) {
  const LongitudinalFixed lf = fitted.latent_fixed.longitudinal(fitted.params.t0);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(curve_at_offset(lf.g, lf.v0, latent_offset(effects, t)));
  return out;
}

std::vector<double> predict_conditional_survival(const IndividualEffects& effects, const FittedModel& fitted,
                                                 double t_last_visit, const std::vector<double>& horizons) {
  const SurvivalFixed sx = fitted.latent_fixed.survival();
  const double log_s_last = log_survival_at_offset(sx, latent_offset(effects, t_last_visit));
  // exp(-700) is the underflow edge of double; conditioning there is degenerate
  if (log_s_last < -700.0)
    throw std::domain_error("predict_conditional_survival: survival at conditioning time is zero");
  std::vector<double> out;
  out.reserve(horizons.size());
  for (double h : horizons) {
    if (h < t_last_visit)
      throw std::invalid_argument("predict_conditional_survival: horizon precedes conditioning time");
    const double log_s = log_survival_at_offset(sx, latent_offset(effects, h));
    double ratio = std::exp(log_s - log_s_last);
    ratio = std::min(ratio, 1.0);
    out.push_back(ratio);
  }
  return out;
}

}  // namespace jt
