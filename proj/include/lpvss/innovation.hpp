#pragma once

#include <vector>

#include "lpvss/model.hpp"

namespace lpvss {

enum class InitMode {
  KnownState,  ///< x_{t0} known exactly, P_{t0|t0-1} = 0
  Explicit,    ///< user-supplied P_{t0|t0-1}
};

/// Time-varying innovation-form quantities along one scheduling trajectory:
/// gain K_t, prior covariance P_{t|t-1}, posterior covariance P_{t|t}, and
/// innovation covariance Omega_t for t = t0 .. t0+N-1. Immutable once built.
struct FilterTrace {
  int t0 = 0;
  InitMode init_mode = InitMode::KnownState;
  Matrix p_init;  ///< used when init_mode == Explicit

  std::vector<Matrix> gain;       ///< K_t, n_x x n_y
  std::vector<Matrix> prior;      ///< P_{t|t-1}, n_x x n_x
  std::vector<Matrix> posterior;  ///< P_{t|t}, n_x x n_x
  std::vector<Matrix> innov_cov;  ///< Omega_t, n_y x n_y

  int length() const { return static_cast<int>(gain.size()); }
  int index_of(int t) const { return t - t0; }

  const Matrix& gain_at(int t) const { return gain.at(static_cast<size_t>(t - t0)); }
  const Matrix& prior_at(int t) const { return prior.at(static_cast<size_t>(t - t0)); }
  const Matrix& posterior_at(int t) const { return posterior.at(static_cast<size_t>(t - t0)); }
  const Matrix& innov_cov_at(int t) const { return innov_cov.at(static_cast<size_t>(t - t0)); }
};

/// One step of the innovation recursion at scheduling point p:
///   Omega  = C P C' + H R H'
///   K      = (A P C' + G S H') Omega^-1
///   P_post = P - P C' Omega^-1 C P
///   P_next = A P A' - K Omega K' + G Q G'   (symmetrized)
struct RiccatiStep {
  Matrix gain;
  Matrix innov_cov;
  Matrix posterior;
  Matrix prior_next;
  double innov_cond = 0.0;  ///< condition number of Omega
};

/// Throws NumericalError with the Omega spectrum if Omega is near-singular
/// (min eig <= kInnovationCovTol * trace).
RiccatiStep riccati_step(const LpvSsModel& model, const Vector& p, const Matrix& p_prior);

/// Measurement-update gain P C' Omega^-1 (distinct from the one-step-ahead
/// gain K; it propagates the posterior error, e.g. in the error dynamics
/// W_t = (I - Ktilde_{t+1} C(p_{t+1})) Abar_t).
Matrix measurement_gain(const Matrix& p_prior, const Matrix& c, const Matrix& omega);

/// Iterates riccati_step along the trajectory from P_{t0|t0-1} = 0
/// (KnownState) or the supplied prior.
FilterTrace compute_trace(const LpvSsModel& model, const SchedulingTrajectory& traj,
                          InitMode init_mode = InitMode::KnownState, const Matrix& p_init = {});

/// Same trace through the decorrelated coordinates:
///   Omega  = C P C' + H R H',   Kbar = Abar P C' Omega^-1,
///   P_next = Abar P Abar' - Kbar Omega Kbar' + G Qbar G',
///   K      = Kbar + G S R^-1 H^-1.
/// Algebraically identical to compute_trace for every S; kept as an
/// independent route for cross-checking.
FilterTrace compute_trace_decorrelated(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                       InitMode init_mode = InitMode::KnownState,
                                       const Matrix& p_init = {});

/// Filter pass over measured data: innovations xi_t = y_t - C xhat_t - D u_t
/// and state estimates xhat_{t+1} = A xhat_t + B u_t + K_t xi_t.
struct FilterRun {
  std::vector<Vector> state_estimate;  ///< xhat_t
  std::vector<Vector> innovation;      ///< xi_t
  std::vector<double> innov_cond;      ///< condition number of Omega_t per step
};

FilterRun run_filter(const LpvSsModel& model, const FilterTrace& trace,
                     const SchedulingTrajectory& traj, const std::vector<Vector>& u,
                     const std::vector<Vector>& y, const Vector& x0);

/// Propagates the estimation-error covariance under an arbitrary gain
/// sequence with the full quadratic (Joseph-type) form
///   P_next = (A - K C) P (A - K C)' + G Q G' + K H R H' K'
///            - G S H' K' - K H S' G',
/// which reproduces the optimal recursion when fed the optimal gains and
/// stays valid for any other gain sequence. Returns the prior sequence
/// P'_{t|t-1} for t = t0 .. t0+N-1.
std::vector<Matrix> suboptimal_covariance(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                          const std::vector<Matrix>& gains, const Matrix& p_init);

}  // namespace lpvss
