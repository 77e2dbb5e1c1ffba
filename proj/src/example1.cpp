#include "lpvss/example1.hpp"

#include <cmath>
#include <string>

#include "lpvss/rng.hpp"

namespace lpvss {
namespace example1 {

std::vector<double> gen_nonzero_scheduling(int n, double p_min, std::uint64_t seed) {
  if (!(p_min > 0.0 && p_min < 1.0))
    throw StructuralError("example1: p_min must lie in (0,1)");
  Rng rng(seed);
  std::vector<double> p(static_cast<size_t>(n));
  for (double& pk : p) {
    const double mag = rng.uniform(p_min, 1.0);
    pk = rng.coin() ? mag : -mag;
  }
  return p;
}

namespace {
void require_lengths(size_t n, const std::vector<double>& u, const std::vector<double>& e,
                     const std::vector<double>& p, size_t p_needed, const char* who) {
  if (u.size() < n || e.size() < n || p.size() < p_needed)
    throw StructuralError(std::string(who) + ": sequence lengths do not cover the horizon");
}
}  // namespace

std::vector<double> simulate_io(const std::vector<double>& u, const std::vector<double>& e,
                                const std::vector<double>& p) {
  const size_t n = u.size();
  require_lengths(n, u, e, p, n, "simulate_io");
  std::vector<double> y(n);
  double y_prev = 0.0, u_prev = 0.0, e_prev = 0.0;  // rest before t=0
  for (size_t t = 0; t < n; ++t) {
    y[t] = -p[t] * y_prev + p[t] * u_prev + e[t] + e_prev;
    y_prev = y[t];
    u_prev = u[t];
    e_prev = e[t];
  }
  return y;
}

std::vector<double> simulate_rational_ss(const std::vector<double>& u,
                                         const std::vector<double>& e,
                                         const std::vector<double>& p, double p_min) {
  const size_t n = u.size();
  require_lengths(n, u, e, p, n + 1, "simulate_rational_ss");
  std::vector<double> y(n);
  double x = 0.0;
  for (size_t t = 0; t < n; ++t) {
    y[t] = p[t] * x + e[t];
    const double p_next = p[t + 1];
    if (std::abs(p_next) < p_min)
      throw NumericalError("simulate_rational_ss: |p_{t+1}| < p_min at t=" + std::to_string(t) +
                           " (p_{t+1}=" + std::to_string(p_next) + ")");
    x = -p[t] * x + u[t] + ((1.0 - p_next) / p_next) * e[t];
  }
  return y;
}

std::vector<double> simulate_augmented_ss(const std::vector<double>& u,
                                          const std::vector<double>& e,
                                          const std::vector<double>& p) {
  const size_t n = u.size();
  require_lengths(n, u, e, p, n, "simulate_augmented_ss");
  std::vector<double> y(n);
  double x1 = 0.0, x2 = 0.0;
  for (size_t t = 0; t < n; ++t) {
    y[t] = -p[t] * x1 + x2 + e[t];
    const double x1_next = -p[t] * x1 + x2 - u[t] + e[t];
    x2 = e[t];
    x1 = x1_next;
  }
  return y;
}

ComparisonResult compare_once(const Config& config) {
  if (config.horizon < 1) throw StructuralError("example1: horizon must be >= 1");
  Rng rng(derive_stream_seed(config.seed, 1));
  std::vector<double> u(static_cast<size_t>(config.horizon));
  std::vector<double> e(static_cast<size_t>(config.horizon));
  for (int t = 0; t < config.horizon; ++t) {
    u[static_cast<size_t>(t)] = config.amplitude * rng.normal();
    e[static_cast<size_t>(t)] = config.amplitude * rng.normal();
  }
  // One extra sample: the minimal realization reads p_{t+1}.
  const std::vector<double> p =
      gen_nonzero_scheduling(config.horizon + 1, config.p_min, derive_stream_seed(config.seed, 2));

  ComparisonResult result;
  result.y_io = simulate_io(u, e, p);
  result.y_rational = simulate_rational_ss(u, e, p, config.p_min);
  result.y_augmented = simulate_augmented_ss(u, e, p);
  for (int t = 0; t < config.horizon; ++t) {
    const double a = result.y_io[static_cast<size_t>(t)];
    const double b = result.y_rational[static_cast<size_t>(t)];
    const double c = result.y_augmented[static_cast<size_t>(t)];
    result.max_abs_diff = std::max(
        {result.max_abs_diff, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
  }
  return result;
}

}  // namespace example1
}  // namespace lpvss
