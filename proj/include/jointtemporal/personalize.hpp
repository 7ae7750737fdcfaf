#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jointtemporal/types.hpp"

namespace jt {

/// A fitted model as the personalizer sees it: maximized parameters plus the
/// realized latent fixed effects (frozen; their prior does not enter the MAP
/// objective).
struct FittedModel {
  PopulationParams params;
  LatentFixedEffects latent_fixed;
};

struct PersonalizeOptions {
  std::size_t k_visits = 2;        // visits used for conditioning; 0 = all
  double objective_tol = 1e-8;
  std::size_t max_evals = 4000;
  double gradient_tol = 1e-3;      // first-order check backing `converged`
  std::uint64_t seed = 0;          // jitters restarts after a failed first pass
};

struct PersonalizationResult {
  IndividualEffects effects;
  double map_objective = 0.0;  // attained posterior log-density (up to constants)
  bool converged = false;
  std::size_t n_evals = 0;
  double t_last_visit = 0.0;   // conditioning time used by survival predictions
};

/// MAP estimate of (xi, tau) for one patient given its first k visits; the
/// event is always treated as censored at the last used visit. Nelder-Mead
/// simplex with multi-start: the prior mode, a moment-matched guess, and
/// (when provided) a warm start from a previous patient.
PersonalizationResult personalize(const PatientRecord& record, const FittedModel& fitted,
                                  const PersonalizeOptions& options = {},
                                  const std::optional<IndividualEffects>& warm_start = std::nullopt);

/// Batch personalization; patients are independent and processed in order
/// (each warm-starting the next). n_threads > 1 partitions patients across
/// workers deterministically (warm starts then apply within a partition).
std::vector<PersonalizationResult> personalize_all(const std::vector<PatientRecord>& records,
                                                   const FittedModel& fitted,
                                                   const PersonalizeOptions& options = {},
                                                   std::size_t n_threads = 1);

/// Noise-free curve prediction at the requested times.
std::vector<double> predict_longitudinal(const IndividualEffects& effects, const FittedModel& fitted,
                                         const std::vector<double>& times);

/// Conditional survival S(h)/S(t_last_visit) for each horizon (absolute
/// chronological times >= t_last_visit), clipped to (0, 1]. Computed in log
/// space; throws if the conditioning survival has underflowed to zero.
std::vector<double> predict_conditional_survival(const IndividualEffects& effects, const FittedModel& fitted,
                                                 double t_last_visit, const std::vector<double>& horizons);

/// The MAP objective itself (log posterior up to constants); exposed for
/// diagnostics and tests.
double map_objective(const PatientRecord& record, std::size_t k_visits, const FittedModel& fitted,
                     const IndividualEffects& effects);

}  // namespace jt
