#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpvss/innovation.hpp"
#include "lpvss/model.hpp"

namespace lpvss {

/// Uniform spectral bounds observed along a trajectory ensemble:
///   alpha1 I >= G Qbar G' >= alpha2 I        (stochastic controllability)
///   beta1 I  <= C'(H R H')^-1 C <= beta2 I   (stochastic observability)
///   delta1 I >= Abar' Abar >= delta2 I       (bounded invertible Abar)
/// plus the two-step window constants beta3 (smallest gain of the stacked
/// observability-type map), beta5 (largest eigenvalue of the windowed
/// innovation-covariance block), beta6 (smallest gain of the inverse error
/// propagator pair), and the derived Lyapunov constants
///   gamma1 = beta1/(1 + alpha1 beta1), gamma2 = 1/alpha2 + beta2,
///   gamma3 = -beta3^2 beta6 / beta5.
/// Two contraction-rate forms are kept: gamma2/(gamma2 - gamma3) and the
/// gain-form beta5(a2 b2 + 1) / (beta5(a2 b2 + 1) + a2 b3 b6); they differ in
/// the power of beta3, so both are reported and the conservative maximum is
/// used where a single rate is needed.
struct ConditionConstants {
  double alpha1 = 0, alpha2 = 0;
  double beta1 = 0, beta2 = 0;
  double delta1 = 0, delta2 = 0;
  double beta3 = 0, beta5 = 0, beta6 = 0;

  double gamma1 = 0, gamma2 = 0, gamma3 = 0;
  double xi_lyapunov = 0;
  double xi_gain_form = 0;

  bool valid = false;
  std::string violation;  ///< set when a constant hits its tolerance

  double xi() const { return std::max(xi_lyapunov, xi_gain_form); }

  /// Scale of the uniform posterior-covariance lower bound,
  /// alpha2 / (alpha2 beta2 + 1); restart seeds must sit strictly below it.
  double posterior_floor() const { return alpha2 / (alpha2 * beta2 + 1.0); }

  /// Derives gammas and the two rates, checking the sign/interval invariants.
  void finalize();
};

/// Burn-in before covariance bounds are trusted: max(20, 5 nx).
int burn_in_steps(int nx);

/// Tight extremes over every visited time step of the ensemble; beta3/beta5/
/// beta6 carry a 1% safety margin in the conservative direction. When a
/// lower constant is at tolerance, the result is flagged invalid (bound
/// inapplicable) instead of throwing.
ConditionConstants estimate_condition_constants(const LpvSsModel& model,
                                                const std::vector<SchedulingTrajectory>& ensemble);

/// Worst-case restart error after a window of length tau:
///   xi^tau * delta1 nx (alpha1 beta1 + 1)^2 (alpha2 beta2 + 1) / (alpha2 beta1^2).
double restart_error_bound(const ConditionConstants& c, int nx, int tau);

/// Posterior-error propagator W_i = (I - Ktilde_{i+1} C(p_{i+1})) Abar_i,
/// with Ktilde the measurement-update gain from the trace.
Matrix error_propagator(const LpvSsModel& model, const SchedulingTrajectory& traj,
                        const FilterTrace& trace, int i);

/// Prior covariance at time t recomputed from a covariance recursion
/// restarted at t - tau: the seed substitutes the posterior at t - tau - 1
/// with p0_posterior, maps it through Abar P0 Abar' + G Qbar G' at
/// p_{t-tau-1}, then iterates the optimal recursion up to t. Windows
/// reaching back to the trace start fall back to the trace's own
/// initialization (exact recovery).
Matrix restarted_prior_at(const LpvSsModel& model, const SchedulingTrajectory& traj,
                          const FilterTrace& trace, int t, int tau, const Matrix& p0_posterior);

struct RestartExperiment {
  int tau = 0;
  double p0_scale = 0.5;
  Matrix p0;  ///< seed posterior, p0_scale * posterior_floor * I

  std::vector<int> times;
  std::vector<double> prior_diff_norm;     ///< ||P_{t|t-1} - Phat_{t|t-1}||_2
  std::vector<double> post_diff_min_eig;   ///< min eig of P_{t|t} - Phat_{t|t}

  double bound = 0.0;
  double max_prior_diff_norm = 0.0;
  double min_post_diff_eig = 0.0;
  bool within_bound = false;
  bool sandwich_ok = false;  ///< posterior differences PSD up to -1e-9
};

inline constexpr double kSandwichTol = 1e-9;

RestartExperiment restart_experiment(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                     const ConditionConstants& constants, int tau,
                                     double p0_scale = 0.5);

/// Checks ||prod_{i=s}^{s+tau-1} W_i e||^2 <= xi^tau (gamma2/gamma1) ||e||^2
/// over every admissible window and sampled unit vectors e, for each window
/// length 1..tau_max.
struct DecayCheckReport {
  int tau_max = 0;
  int windows_checked = 0;
  int violations = 0;
  double max_ratio = 0.0;  ///< max of lhs/rhs over all checks
  bool propagator_singular = false;  ///< some W_i singular: beta6 inapplicable
  bool ok() const { return violations == 0 && !propagator_singular; }
};

DecayCheckReport lyapunov_decay_check(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                      const ConditionConstants& constants, int tau_max,
                                      int vectors_per_window, std::uint64_t seed);

}  // namespace lpvss
