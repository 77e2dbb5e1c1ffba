#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpvss/innovation.hpp"
#include "lpvss/model.hpp"

namespace lpvss {

enum class InputKind { Zero, Prbs, Sinusoid, File };
enum class SchedulingKind { Constant, Sinusoid, UniformRandomWalk, File };

struct SimConfig {
  int horizon = 100;
  std::uint64_t seed = 1;
  Vector x0;  ///< empty -> zero vector

  InputKind input_kind = InputKind::Zero;
  double input_amplitude = 1.0;
  double input_omega = 0.35;  ///< rad/step for sinusoid inputs
  std::string input_file;

  SchedulingKind sched_kind = SchedulingKind::Constant;
  Vector sched_value;               ///< constant value; empty -> box midpoint
  double sched_amplitude_frac = 0.8;  ///< sinusoid amplitude as fraction of half-width
  double sched_omega = 0.2;
  double walk_step_frac = 0.1;  ///< random-walk step as fraction of box width
  std::string sched_file;
};

/// Time-aligned signals of one run; all sequences have the same length.
/// xi is populated only by innovation-form runs.
struct SimRecord {
  int t0 = 0;
  std::vector<Vector> x, u, p, y, w, v, xi;

  int length() const { return static_cast<int>(y.size()); }
};

/// Deterministic given the seed; all samples clipped into the box.
SchedulingTrajectory gen_scheduling(const SimConfig& config, const SchedulingBox& box);

std::vector<Vector> gen_input(const SimConfig& config, int nu);

struct NoiseDraws {
  std::vector<Vector> w, v;
};

/// i.i.d. joint draws [w_t; v_t] ~ N(0, Sigma) through the lower Cholesky
/// factor of Sigma; the (n_x + n_y) standard normals of each time step are
/// consumed in order, so streams are reproducible.
NoiseDraws sample_noise(const NoiseSpec& noise, int n, std::uint64_t seed);

/// Exact forward recursion of the general-noise representation.
SimRecord simulate_general(const LpvSsModel& model, const SchedulingTrajectory& traj,
                           const std::vector<Vector>& u, const NoiseDraws& noise,
                           const Vector& x0 = {});

/// Innovation-form forward recursion with supplied innovation draws.
SimRecord simulate_innovation(const LpvSsModel& model, const SchedulingTrajectory& traj,
                              const std::vector<Vector>& u, const FilterTrace& trace,
                              const std::vector<Vector>& xi, const Vector& x0 = {});

/// Innovation-form forward recursion drawing xi_t ~ N(0, Omega_t) per step
/// (time-varying covariance, lower Cholesky factor of each Omega_t).
SimRecord simulate_innovation(const LpvSsModel& model, const SchedulingTrajectory& traj,
                              const std::vector<Vector>& u, const FilterTrace& trace,
                              std::uint64_t seed, const Vector& x0 = {});

/// Recomputes y_t = C(p_t) x_t + D(p_t) u_t + H(p_t) v_t from the stored
/// signals and returns the maximum absolute deviation from the stored y.
double replay_output_error(const LpvSsModel& model, const SimRecord& record);

}  // namespace lpvss
