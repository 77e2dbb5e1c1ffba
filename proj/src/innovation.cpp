#include "lpvss/innovation.hpp"

#include <sstream>

namespace lpvss {

namespace {

Matrix initial_prior(const LpvSsModel& model, InitMode mode, const Matrix& p_init) {
  const int nx = model.dims().nx;
  if (mode == InitMode::KnownState) return Matrix::Zero(nx, nx);
  if (p_init.rows() != nx || p_init.cols() != nx)
    throw StructuralError("filter trace: explicit initial covariance must be nx x nx");
  if (!is_positive_semidefinite(symmetrized(p_init)))
    throw NumericalError("filter trace: explicit initial covariance is not PSD");
  return symmetrized(p_init);
}

std::string spectrum_string(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    os << (i ? ", " : "") << es.eigenvalues()(i);
  os << "]";
  return os.str();
}

}  // namespace

RiccatiStep riccati_step(const LpvSsModel& model, const Vector& p, const Matrix& p_prior) {
  const Matrix a = model.a_at(p);
  const Matrix c = model.c_at(p);
  const Matrix g = model.g_at(p);
  const Matrix h = model.h_at(p);
  const Matrix& q = model.noise().Q;
  const Matrix& s = model.noise().S;
  const Matrix& r = model.noise().R;

  if (p_prior.rows() != model.dims().nx || p_prior.cols() != model.dims().nx)
    throw StructuralError("riccati_step: prior covariance must be nx x nx");

  const Matrix p_sym = symmetrized(p_prior);
  RiccatiStep out;
  out.innov_cov = symmetrized(c * p_sym * c.transpose() + h * r * h.transpose());

  const SymmetricInverse omega_inv = invert_spd(out.innov_cov);
  if (omega_inv.min_eig <= kInnovationCovTol * std::max(out.innov_cov.trace(), 1.0))
    throw NumericalError("riccati_step: innovation covariance near-singular at p=" +
                         format_point(p) + ", spectrum " + spectrum_string(out.innov_cov));
  out.innov_cond = omega_inv.condition();

  out.gain = (a * p_sym * c.transpose() + g * s * h.transpose()) * omega_inv.inverse;
  out.posterior =
      symmetrized(p_sym - p_sym * c.transpose() * omega_inv.inverse * c * p_sym);
  out.prior_next = symmetrized(a * p_sym * a.transpose() -
                               out.gain * out.innov_cov * out.gain.transpose() +
                               g * q * g.transpose());
  return out;
}

Matrix measurement_gain(const Matrix& p_prior, const Matrix& c, const Matrix& omega) {
  return p_prior * c.transpose() * invert_spd(symmetrized(omega)).inverse;
}

FilterTrace compute_trace(const LpvSsModel& model, const SchedulingTrajectory& traj,
                          InitMode init_mode, const Matrix& p_init) {
  FilterTrace trace;
  trace.t0 = traj.t0;
  trace.init_mode = init_mode;
  trace.p_init = init_mode == InitMode::Explicit ? p_init : Matrix();

  Matrix p = initial_prior(model, init_mode, p_init);
  trace.gain.reserve(static_cast<size_t>(traj.length()));
  for (int k = 0; k < traj.length(); ++k) {
    const Vector& pt = traj.samples[static_cast<size_t>(k)];
    RiccatiStep step;
    try {
      step = riccati_step(model, pt, p);
    } catch (const NumericalError& e) {
      throw NumericalError("compute_trace: at t=" + std::to_string(traj.t0 + k) + ": " + e.what());
    }
    trace.prior.push_back(p);
    trace.gain.push_back(step.gain);
    trace.posterior.push_back(step.posterior);
    trace.innov_cov.push_back(step.innov_cov);
    p = step.prior_next;
  }
  return trace;
}

FilterTrace compute_trace_decorrelated(const LpvSsModel& model, const SchedulingTrajectory& traj,
                                       InitMode init_mode, const Matrix& p_init) {
  FilterTrace trace;
  trace.t0 = traj.t0;
  trace.init_mode = init_mode;
  trace.p_init = init_mode == InitMode::Explicit ? p_init : Matrix();

  const Matrix r_inv = invert_spd(symmetrized(model.noise().R)).inverse;
  Matrix p = initial_prior(model, init_mode, p_init);
  for (int k = 0; k < traj.length(); ++k) {
    const Vector& pt = traj.samples[static_cast<size_t>(k)];
    const DecorrelatedParts parts = decorrelate_at(model, pt);
    const Matrix c = model.c_at(pt);
    const Matrix g = model.g_at(pt);
    const Matrix h = model.h_at(pt);

    const Matrix omega =
        symmetrized(c * p * c.transpose() + h * model.noise().R * h.transpose());
    const SymmetricInverse omega_inv = invert_spd(omega);
    if (omega_inv.min_eig <= kInnovationCovTol * std::max(omega.trace(), 1.0))
      throw NumericalError("compute_trace_decorrelated: innovation covariance near-singular at t=" +
                           std::to_string(traj.t0 + k));

    const Matrix kbar = parts.abar * p * c.transpose() * omega_inv.inverse;
    const Matrix h_inv = h.partialPivLu().solve(Matrix::Identity(h.rows(), h.cols()));
    const Matrix feed = g * model.noise().S * r_inv * h_inv;

    trace.prior.push_back(p);
    trace.innov_cov.push_back(omega);
    trace.gain.push_back(kbar + feed);
    trace.posterior.push_back(
        symmetrized(p - p * c.transpose() * omega_inv.inverse * c * p));
    p = symmetrized(parts.abar * p * parts.abar.transpose() -
                    kbar * omega * kbar.transpose() + g * parts.qbar * g.transpose());
  }
  return trace;
}

FilterRun run_filter(const LpvSsModel& model, const FilterTrace& trace,
                     const SchedulingTrajectory& traj, const std::vector<Vector>& u,
                     const std::vector<Vector>& y, const Vector& x0) {
  const size_t n = static_cast<size_t>(traj.length());
  if (trace.gain.size() != n || u.size() != n || y.size() != n || trace.t0 != traj.t0)
    throw StructuralError("run_filter: trace, trajectory, and data lengths must all match");
  if (x0.size() != model.dims().nx)
    throw StructuralError("run_filter: x0 must have dimension nx");

  FilterRun run;
  run.state_estimate.reserve(n);
  run.innovation.reserve(n);
  Vector xhat = x0;
  for (size_t k = 0; k < n; ++k) {
    const Vector& pt = traj.samples[k];
    const Vector xi = y[k] - model.c_at(pt) * xhat - model.d_at(pt) * u[k];
    run.state_estimate.push_back(xhat);
    run.innovation.push_back(xi);
    const SymmetricInverse om = invert_spd(trace.innov_cov[k]);
    run.innov_cond.push_back(om.condition());
    xhat = model.a_at(pt) * xhat + model.b_at(pt) * u[k] + trace.gain[k] * xi;
  }
  return run;
}

std::vector<Matrix> suboptimal_covariance(const LpvSsModel& model,
                                          const SchedulingTrajectory& traj,
                                          const std::vector<Matrix>& gains, const Matrix& p_init) {
  if (gains.size() != static_cast<size_t>(traj.length()))
    throw StructuralError("suboptimal_covariance: one gain per trajectory sample required");
  const int nx = model.dims().nx;
  const int ny = model.dims().ny;
  const Matrix& q = model.noise().Q;
  const Matrix& s = model.noise().S;
  const Matrix& r = model.noise().R;

  Matrix p = p_init.size() == 0 ? Matrix::Zero(nx, nx) : symmetrized(p_init);
  if (p.rows() != nx || p.cols() != nx)
    throw StructuralError("suboptimal_covariance: initial covariance must be nx x nx");

  std::vector<Matrix> priors;
  priors.reserve(gains.size());
  for (size_t k = 0; k < gains.size(); ++k) {
    const Vector& pt = traj.samples[k];
    const Matrix& gain = gains[k];
    if (gain.rows() != nx || gain.cols() != ny)
      throw StructuralError("suboptimal_covariance: gain at t=" + std::to_string(traj.t0 + static_cast<int>(k)) +
                            " must be nx x ny");
    const Matrix a = model.a_at(pt);
    const Matrix c = model.c_at(pt);
    const Matrix g = model.g_at(pt);
    const Matrix h = model.h_at(pt);

    priors.push_back(p);
    const Matrix closed = a - gain * c;
    p = symmetrized(closed * p * closed.transpose() + g * q * g.transpose() +
                    gain * h * r * h.transpose() * gain.transpose() -
                    g * s * h.transpose() * gain.transpose() -
                    gain * h * s.transpose() * g.transpose());
  }
  return priors;
}

}  // namespace lpvss
