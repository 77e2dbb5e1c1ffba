#include "lpvss/gain_approx.hpp"

#include <algorithm>
#include <cmath>

namespace lpvss {

TruncatedGainTrace truncated_gain_trace(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                        const FilterTrace& reference, int tau,
                                        const Matrix& p0_posterior) {
  if (tau < 0) throw StructuralError("truncated_gain_trace: tau must be >= 0");
  if (reference.length() != traj.length() || reference.t0 != traj.t0)
    throw StructuralError("truncated_gain_trace: reference trace does not match the trajectory");

  TruncatedGainTrace out;
  out.tau = tau;
  out.t0 = traj.t0;
  for (int t = traj.t0; t < traj.t0 + traj.length(); ++t) {
    const Matrix phat = restarted_prior_at(model, traj, reference, t, tau, p0_posterior);
    const RiccatiStep step = riccati_step(model, traj.at_time(t), phat);
    out.prior.push_back(phat);
    out.gain.push_back(step.gain);
    out.innov_cov.push_back(step.innov_cov);
  }
  return out;
}

namespace {
double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace

DecayCurve decay_study(const LpvSsModel& model, const std::vector<SchedulingTrajectory>& ensemble,
                       const std::vector<int>& taus, const ConditionConstants& constants,
                       double p0_scale, int stride) {
  if (ensemble.empty()) throw StructuralError("decay_study: ensemble must be nonempty");
  if (taus.empty()) throw StructuralError("decay_study: tau list must be nonempty");
  for (size_t k = 1; k < taus.size(); ++k)
    if (taus[k] <= taus[k - 1]) throw StructuralError("decay_study: taus must be strictly increasing");
  if (taus.front() < 0) throw StructuralError("decay_study: taus must be non-negative");
  if (stride < 1) throw StructuralError("decay_study: stride must be >= 1");
  if (!constants.valid)
    throw StructuralError("decay_study: condition constants invalid (" + constants.violation + ")");

  const int nx = model.dims().nx;
  const int burn = burn_in_steps(nx);
  const int tau_max = taus.back();
  const Matrix p0 =
      p0_scale * constants.posterior_floor() * Matrix::Identity(nx, nx);

  DecayCurve curve;
  curve.taus = taus;
  const size_t ntau = taus.size();
  std::vector<std::vector<double>> remainder(ntau), cov(ntau);

  for (const SchedulingTrajectory& traj : ensemble) {
    // Keep every window genuinely truncated: the largest tau must not reach
    // back into the burn-in or the trace start.
    const int first_t = traj.t0 + burn + tau_max + 1;
    const int last_t = traj.t0 + traj.length() - 1;
    if (first_t > last_t)
      throw StructuralError("decay_study: trajectory too short for tau_max + burn-in");

    const FilterTrace trace = compute_trace(model, traj, InitMode::KnownState);
    for (int t = first_t; t <= last_t; t += stride) {
      for (size_t k = 0; k < ntau; ++k) {
        const Matrix phat = restarted_prior_at(model, traj, trace, t, taus[k], p0);
        const Matrix khat = riccati_step(model, traj.at_time(t), phat).gain;
        remainder[k].push_back(spectral_norm(trace.gain_at(t) - khat));
        cov[k].push_back(spectral_norm(trace.prior_at(t) - phat));
      }
    }
  }

  curve.samples_per_tau = static_cast<int>(remainder.front().size());
  for (size_t k = 0; k < ntau; ++k) {
    curve.remainder_max.push_back(
        remainder[k].empty() ? 0.0 : *std::max_element(remainder[k].begin(), remainder[k].end()));
    curve.remainder_median.push_back(median(remainder[k]));
    curve.cov_max.push_back(cov[k].empty() ? 0.0 : *std::max_element(cov[k].begin(), cov[k].end()));
    curve.cov_median.push_back(median(cov[k]));
  }
  for (size_t k = 0; k + 1 < ntau; ++k) {
    int decayed = 0;
    for (size_t j = 0; j < remainder[k].size(); ++j)
      if (remainder[k][j] > remainder[k + 1][j]) ++decayed;
    curve.decay_fraction.push_back(
        remainder[k].empty() ? 0.0 : static_cast<double>(decayed) / remainder[k].size());
  }
  return curve;
}

}  // namespace lpvss
