#pragma once

#include <cstdint>
#include <vector>

#include "lpvss/types.hpp"

namespace lpvss {
namespace example1 {

/// Three realizations of the same scalar LPV input-output law
///   y_t = -p_t y_{t-1} + p_t u_{t-1} + e_t + e_{t-1}:
/// the difference equation itself, a state-minimal state-space form whose
/// noise feed-through divides by p_{t+1}, and a two-state form with static
/// affine scheduling dependence. All three start from rest (states, past
/// outputs, and past noises zero before t=0), which makes their outputs
/// identical sample by sample.

struct Config {
  int horizon = 100;
  std::uint64_t seed = 1;
  double p_min = 0.1;  ///< |p_t| >= p_min; the minimal realization divides by p_{t+1}
  double amplitude = 1.0;  ///< scale of the random u and e sequences
};

/// Scheduling samples uniform over [-1, -p_min] U [p_min, 1], deterministic
/// given the seed. Returns n samples.
std::vector<double> gen_nonzero_scheduling(int n, double p_min, std::uint64_t seed);

/// y_t = -p_t y_{t-1} + p_t u_{t-1} + e_t + e_{t-1}; needs p_0..p_{N-1}.
std::vector<double> simulate_io(const std::vector<double>& u, const std::vector<double>& e,
                                const std::vector<double>& p);

/// x_{t+1} = -p_t x_t + u_t + ((1 - p_{t+1}) / p_{t+1}) e_t,  y_t = p_t x_t + e_t.
/// Reads one step ahead in p, so p must hold N+1 samples; throws
/// NumericalError naming t if |p_{t+1}| < p_min.
std::vector<double> simulate_rational_ss(const std::vector<double>& u,
                                         const std::vector<double>& e,
                                         const std::vector<double>& p, double p_min);

/// Two-state static-affine form:
///   xb_{t+1} = [[-p_t, 1], [0, 0]] xb_t + [[-1, 1], [0, 1]] [u_t; e_t],
///   y_t      = [-p_t, 1] xb_t + e_t.
std::vector<double> simulate_augmented_ss(const std::vector<double>& u,
                                          const std::vector<double>& e,
                                          const std::vector<double>& p);

struct ComparisonResult {
  std::vector<double> y_io, y_rational, y_augmented;
  double max_abs_diff = 0.0;  ///< worst pairwise discrepancy over all t
};

/// One random (u, e, p) triple through all three simulators.
ComparisonResult compare_once(const Config& config);

}  // namespace example1
}  // namespace lpvss
