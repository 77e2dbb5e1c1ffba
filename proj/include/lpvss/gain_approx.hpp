#pragma once

#include <vector>

#include "lpvss/convergence.hpp"
#include "lpvss/innovation.hpp"
#include "lpvss/model.hpp"

namespace lpvss {

/// Windowed gain K_t^(tau): the gain formula evaluated with the restarted
/// prior covariance, so it depends only on p_{t-tau}, ..., p_t.
struct TruncatedGainTrace {
  int tau = 0;
  int t0 = 0;
  std::vector<Matrix> gain;       ///< K_t^(tau)
  std::vector<Matrix> prior;      ///< Phat^(tau)_{t|t-1}
  std::vector<Matrix> innov_cov;  ///< Omega from the restarted prior

  const Matrix& gain_at(int t) const { return gain.at(static_cast<size_t>(t - t0)); }
  const Matrix& prior_at(int t) const { return prior.at(static_cast<size_t>(t - t0)); }
};

/// One restarted window per time step; windows reaching the trace start
/// reproduce the reference gain exactly.
TruncatedGainTrace truncated_gain_trace(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                        const FilterTrace& reference, int tau,
                                        const Matrix& p0_posterior);

/// Remainder and covariance-difference decay statistics across a trajectory
/// ensemble and a strictly increasing tau list. Statistics for every tau are
/// taken over the identical (trial, t) index set.
struct DecayCurve {
  std::vector<int> taus;
  std::vector<double> remainder_max;     ///< max_t,trial ||K_t - K_t^(tau)||_2
  std::vector<double> remainder_median;
  std::vector<double> cov_max;           ///< max_t,trial ||P_{t|t-1} - Phat^(tau)_{t|t-1}||_2
  std::vector<double> cov_median;
  /// Fraction of (trial, t) pairs with strict remainder decay between
  /// adjacent taus; entry k compares taus[k] against taus[k+1].
  std::vector<double> decay_fraction;
  int samples_per_tau = 0;
};

DecayCurve decay_study(const LpvSsModel& model, const std::vector<SchedulingTrajectory>& ensemble,
                       const std::vector<int>& taus, const ConditionConstants& constants,
                       double p0_scale = 0.5, int stride = 5);

}  // namespace lpvss
