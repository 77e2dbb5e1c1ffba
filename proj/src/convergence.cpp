#include "lpvss/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpvss/rng.hpp"

namespace lpvss {

namespace {
constexpr double kConditionTol = 1e-10;  // relative floor below which a lower constant is violated
constexpr double kMargin = 0.01;         // safety margin on the window constants
}  // namespace

int burn_in_steps(int nx) { return std::max(20, 5 * nx); }

void ConditionConstants::finalize() {
  valid = violation.empty();
  if (!valid) return;

  gamma1 = beta1 / (1.0 + alpha1 * beta1);
  gamma2 = 1.0 / alpha2 + beta2;
  gamma3 = -(beta3 * beta3) * beta6 / beta5;
  xi_lyapunov = gamma2 / (gamma2 - gamma3);
  const double obs = beta5 * (alpha2 * beta2 + 1.0);
  xi_gain_form = obs / (obs + alpha2 * beta3 * beta6);

  if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(gamma3 < 0.0)) {
    valid = false;
    violation = "derived Lyapunov constants out of range";
    return;
  }
  if (!(xi_lyapunov > 0.0 && xi_lyapunov < 1.0) ||
      !(xi_gain_form > 0.0 && xi_gain_form < 1.0)) {
    valid = false;
    violation = "contraction rate not inside (0,1)";
  }
}

ConditionConstants estimate_condition_constants(
    const LpvSsModel& model, const std::vector<SchedulingTrajectory>& ensemble) {
  if (ensemble.empty())
    throw StructuralError("estimate_condition_constants: ensemble must be nonempty");

  constexpr double inf = std::numeric_limits<double>::infinity();
  ConditionConstants c;
  c.alpha1 = -inf;
  c.alpha2 = inf;
  c.beta1 = inf;
  c.beta2 = -inf;
  c.delta1 = -inf;
  c.delta2 = inf;
  c.beta3 = inf;
  c.beta5 = -inf;
  c.beta6 = inf;
  bool propagator_singular = false;

  for (const SchedulingTrajectory& traj : ensemble) {
    const FilterTrace trace = compute_trace(model, traj, InitMode::KnownState);
    const int n = traj.length();

    std::vector<Matrix> abar(static_cast<size_t>(n));
    std::vector<Matrix> w(static_cast<size_t>(n));  // W_i defined for i <= n-2
    for (int i = 0; i < n; ++i) {
      const Vector& pt = traj.samples[static_cast<size_t>(i)];
      const DecorrelatedParts parts = decorrelate_at(model, pt);
      abar[static_cast<size_t>(i)] = parts.abar;

      const Matrix g = model.g_at(pt);
      const Matrix ctrl = symmetrized(g * parts.qbar * g.transpose());
      c.alpha1 = std::max(c.alpha1, max_eigenvalue(ctrl));
      c.alpha2 = std::min(c.alpha2, min_eigenvalue(ctrl));

      const Matrix cm = model.c_at(pt);
      const Matrix h = model.h_at(pt);
      const Matrix hrh_inv = invert_spd(symmetrized(h * model.noise().R * h.transpose())).inverse;
      const Matrix obsv = symmetrized(cm.transpose() * hrh_inv * cm);
      c.beta1 = std::min(c.beta1, min_eigenvalue(obsv));
      c.beta2 = std::max(c.beta2, max_eigenvalue(obsv));

      const Matrix ata = symmetrized(parts.abar.transpose() * parts.abar);
      c.delta1 = std::max(c.delta1, max_eigenvalue(ata));
      c.delta2 = std::min(c.delta2, min_eigenvalue(ata));
    }

    for (int i = 0; i + 1 < n; ++i)
      w[static_cast<size_t>(i)] = error_propagator(model, traj, trace, traj.t0 + i);

    const int ny = model.dims().ny;
    const int nx = model.dims().nx;
    for (int i = 2; i < n; ++i) {
      const Vector& p_i = traj.samples[static_cast<size_t>(i)];
      const Vector& p_im1 = traj.samples[static_cast<size_t>(i - 1)];

      // Stacked two-step observability-type map applied to e_{i-2}.
      Matrix stacked(2 * ny, nx);
      stacked.topRows(ny) = model.c_at(p_i) * abar[static_cast<size_t>(i - 1)] *
                            abar[static_cast<size_t>(i - 2)];
      stacked.bottomRows(ny) = model.c_at(p_im1) * model.a_at(p_im1);
      c.beta3 = std::min(c.beta3, min_singular_value(stacked));

      // [[R,0],[0,R]] + L diag(P_{i|i-1}, P_{i-1|i-2}) L' with
      // L = [[C_i, C_i Abar_{i-1}], [0, C_{i-1}]].
      Matrix l(2 * ny, 2 * nx);
      l.topLeftCorner(ny, nx) = model.c_at(p_i);
      l.topRightCorner(ny, nx) = model.c_at(p_i) * abar[static_cast<size_t>(i - 1)];
      l.bottomLeftCorner(ny, nx).setZero();
      l.bottomRightCorner(ny, nx) = model.c_at(p_im1);
      Matrix pdiag = Matrix::Zero(2 * nx, 2 * nx);
      pdiag.topLeftCorner(nx, nx) = trace.prior[static_cast<size_t>(i)];
      pdiag.bottomRightCorner(nx, nx) = trace.prior[static_cast<size_t>(i - 1)];
      Matrix windowed = Matrix::Zero(2 * ny, 2 * ny);
      windowed.topLeftCorner(ny, ny) = model.noise().R;
      windowed.bottomRightCorner(ny, ny) = model.noise().R;
      windowed += l * pdiag * l.transpose();
      c.beta5 = std::max(c.beta5, max_eigenvalue(symmetrized(windowed)));

      // ||W_{i-2}^-1 W_{i-1}^-1 e|| >= beta6 ||e||.
      const Matrix& w2 = w[static_cast<size_t>(i - 2)];
      const Matrix& w1 = w[static_cast<size_t>(i - 1)];
      if (min_singular_value(w2) <= kConditionTol || min_singular_value(w1) <= kConditionTol) {
        propagator_singular = true;
      } else {
        const Matrix inv_pair =
            w2.partialPivLu().solve(w1.partialPivLu().solve(Matrix::Identity(nx, nx)));
        c.beta6 = std::min(c.beta6, min_singular_value(inv_pair));
      }
    }
  }

  c.beta3 *= 1.0 - kMargin;
  c.beta6 *= 1.0 - kMargin;
  c.beta5 *= 1.0 + kMargin;

  const auto violated = [](double lower, double upper) {
    return !(lower > kConditionTol * std::max(1.0, upper)) || !std::isfinite(upper);
  };
  if (violated(c.alpha2, c.alpha1))
    c.violation = "stochastic controllability violated (alpha2 ~ 0)";
  else if (violated(c.beta1, c.beta2))
    c.violation = "stochastic observability violated (beta1 ~ 0)";
  else if (violated(c.delta2, c.delta1))
    c.violation = "Abar loses invertibility (delta2 ~ 0)";
  else if (propagator_singular)
    c.violation = "error propagator W singular along trajectory (beta6 inapplicable)";
  else if (c.beta3 <= kConditionTol || c.beta6 <= kConditionTol || !std::isfinite(c.beta5))
    c.violation = "window constants degenerate (beta3/beta5/beta6)";

  c.finalize();
  return c;
}

double restart_error_bound(const ConditionConstants& c, int nx, int tau) {
  if (!c.valid)
    throw StructuralError("restart_error_bound: constants are invalid (" + c.violation + ")");
  if (nx < 1 || tau < 0) throw StructuralError("restart_error_bound: need nx >= 1, tau >= 0");
  const double prefactor = c.delta1 * nx * (c.alpha1 * c.beta1 + 1.0) *
                           (c.alpha1 * c.beta1 + 1.0) * (c.alpha2 * c.beta2 + 1.0) /
                           (c.alpha2 * c.beta1 * c.beta1);
  return std::pow(c.xi(), tau) * prefactor;
}

Matrix error_propagator(const LpvSsModel& model, const SchedulingTrajectory& traj,
                        const FilterTrace& trace, int i) {
  if (i < traj.t0 || i + 1 >= traj.t0 + traj.length())
    throw StructuralError("error_propagator: W_i needs p_i and p_{i+1} inside the trajectory");
  const Vector& p_next = traj.at_time(i + 1);
  const Matrix c_next = model.c_at(p_next);
  const Matrix ktilde =
      measurement_gain(trace.prior_at(i + 1), c_next, trace.innov_cov_at(i + 1));
  const Matrix abar = decorrelate_at(model, traj.at_time(i)).abar;
  return (Matrix::Identity(model.dims().nx, model.dims().nx) - ktilde * c_next) * abar;
}

Matrix restarted_prior_at(const LpvSsModel& model, const SchedulingTrajectory& traj,
                          const FilterTrace& trace, int t, int tau, const Matrix& p0_posterior) {
  if (tau < 0) throw StructuralError("restarted_prior_at: tau must be >= 0");
  if (t < traj.t0 || t >= traj.t0 + traj.length())
    throw StructuralError("restarted_prior_at: t outside the trajectory");

  const int start = t - tau;
  Matrix p;
  int s;
  if (start <= traj.t0) {
    // Window covers the full history: reuse the trace's own initialization.
    p = trace.init_mode == InitMode::KnownState
            ? Matrix::Zero(model.dims().nx, model.dims().nx)
            : trace.p_init;
    s = traj.t0;
  } else {
    const Vector& p_seed = traj.at_time(start - 1);
    const DecorrelatedParts parts = decorrelate_at(model, p_seed);
    const Matrix g = model.g_at(p_seed);
    p = symmetrized(parts.abar * p0_posterior * parts.abar.transpose() +
                    g * parts.qbar * g.transpose());
    s = start;
  }
  for (; s < t; ++s) p = riccati_step(model, traj.at_time(s), p).prior_next;
  return p;
}

RestartExperiment restart_experiment(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                     const ConditionConstants& constants, int tau,
                                     double p0_scale) {
  if (!(p0_scale > 0.0 && p0_scale < 1.0))
    throw StructuralError("restart_experiment: p0_scale must lie in (0,1)");
  if (!constants.valid)
    throw StructuralError("restart_experiment: condition constants invalid (" +
                          constants.violation + ")");

  const int nx = model.dims().nx;
  const int burn = burn_in_steps(nx);
  const int first_t = traj.t0 + burn + tau + 1;  // seed time t-tau-1 stays past burn-in
  const int last_t = traj.t0 + traj.length() - 1;
  if (first_t > last_t)
    throw StructuralError("restart_experiment: trajectory too short (need > burn-in + tau + 1 samples)");

  const FilterTrace trace = compute_trace(model, traj, InitMode::KnownState);

  RestartExperiment exp;
  exp.tau = tau;
  exp.p0_scale = p0_scale;
  exp.p0 = p0_scale * constants.posterior_floor() * Matrix::Identity(nx, nx);
  exp.bound = restart_error_bound(constants, nx, tau);

  exp.max_prior_diff_norm = 0.0;
  exp.min_post_diff_eig = std::numeric_limits<double>::infinity();
  for (int t = first_t; t <= last_t; ++t) {
    const Matrix phat_prior = restarted_prior_at(model, traj, trace, t, tau, exp.p0);
    exp.times.push_back(t);

    const double diff_norm = spectral_norm(trace.prior_at(t) - phat_prior);
    exp.prior_diff_norm.push_back(diff_norm);
    exp.max_prior_diff_norm = std::max(exp.max_prior_diff_norm, diff_norm);

    const Vector& pt = traj.at_time(t);
    const Matrix cm = model.c_at(pt);
    const Matrix h = model.h_at(pt);
    const Matrix omega_hat =
        symmetrized(cm * phat_prior * cm.transpose() + h * model.noise().R * h.transpose());
    const Matrix phat_post = symmetrized(
        phat_prior -
        phat_prior * cm.transpose() * invert_spd(omega_hat).inverse * cm * phat_prior);
    const double post_eig = min_eigenvalue(symmetrized(trace.posterior_at(t) - phat_post));
    exp.post_diff_min_eig.push_back(post_eig);
    exp.min_post_diff_eig = std::min(exp.min_post_diff_eig, post_eig);
  }
  exp.within_bound = exp.max_prior_diff_norm <= exp.bound;
  exp.sandwich_ok = exp.min_post_diff_eig >= -kSandwichTol;
  return exp;
}

DecayCheckReport lyapunov_decay_check(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                      const ConditionConstants& constants, int tau_max,
                                      int vectors_per_window, std::uint64_t seed) {
  if (tau_max < 0) throw StructuralError("lyapunov_decay_check: tau_max must be >= 0");
  if (!constants.valid)
    throw StructuralError("lyapunov_decay_check: condition constants invalid (" +
                          constants.violation + ")");

  const FilterTrace trace = compute_trace(model, traj, InitMode::KnownState);
  const int nx = model.dims().nx;
  const int burn = burn_in_steps(nx);
  const int n = traj.length();

  DecayCheckReport rep;
  rep.tau_max = tau_max;
  const double lyap_ratio = constants.gamma2 / constants.gamma1;

  std::vector<Matrix> w;
  for (int i = burn; i + 1 < n; ++i) {
    Matrix wi = error_propagator(model, traj, trace, traj.t0 + i);
    if (min_singular_value(wi) <= kConditionTol) rep.propagator_singular = true;
    w.push_back(std::move(wi));
  }

  Rng rng(seed);
  for (int tau = 1; tau <= tau_max; ++tau) {
    if (static_cast<int>(w.size()) < tau) break;
    const double rhs_scale = std::pow(constants.xi(), tau) * lyap_ratio;
    for (size_t start = 0; start + static_cast<size_t>(tau) <= w.size(); ++start) {
      Matrix prod = w[start];
      for (int j = 1; j < tau; ++j) prod = w[start + static_cast<size_t>(j)] * prod;
      for (int v = 0; v < vectors_per_window; ++v) {
        const Vector e = rng.unit_vector(nx);
        const double lhs = (prod * e).squaredNorm();
        ++rep.windows_checked;
        rep.max_ratio = std::max(rep.max_ratio, lhs / rhs_scale);
        if (lhs > rhs_scale * (1.0 + 1e-12)) ++rep.violations;
      }
    }
  }
  return rep;
}

}  // namespace lpvss
