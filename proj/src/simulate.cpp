#include "lpvss/simulate.hpp"

#include <cmath>

#include "lpvss/csv.hpp"
#include "lpvss/rng.hpp"

namespace lpvss {

namespace {

Vector zero_or(const Vector& x0, int n, const char* what) {
  if (x0.size() == 0) return Vector::Zero(n);
  if (x0.size() != n) throw StructuralError(std::string(what) + " has wrong dimension");
  return x0;
}

Matrix lower_cholesky(const Matrix& sym, const char* what) {
  Eigen::LLT<Matrix> llt(symmetrized(sym));
  if (llt.info() != Eigen::Success)
    throw NumericalError(std::string(what) + " is not positive definite (Cholesky failed)");
  return llt.matrixL();
}

}  // namespace

SchedulingTrajectory gen_scheduling(const SimConfig& config, const SchedulingBox& box) {
  if (!box.valid()) throw StructuralError("gen_scheduling: scheduling box is empty or malformed");
  if (config.horizon < 1) throw StructuralError("gen_scheduling: horizon must be >= 1");

  SchedulingTrajectory traj;
  traj.t0 = 0;
  traj.samples.reserve(static_cast<size_t>(config.horizon));
  const int np = box.dim();

  switch (config.sched_kind) {
    case SchedulingKind::Constant: {
      Vector value = config.sched_value.size() == 0 ? box.midpoint() : config.sched_value;
      if (value.size() != np) throw StructuralError("gen_scheduling: constant value has wrong dimension");
      value = box.clip(value);
      for (int t = 0; t < config.horizon; ++t) traj.samples.push_back(value);
      break;
    }
    case SchedulingKind::Sinusoid: {
      const Vector mid = box.midpoint();
      const Vector amp = config.sched_amplitude_frac * box.halfwidth();
      for (int t = 0; t < config.horizon; ++t) {
        Vector p(np);
        for (int j = 0; j < np; ++j)
          p(j) = mid(j) + amp(j) * std::sin(config.sched_omega * t + 0.7 * j);
        traj.samples.push_back(box.clip(p));
      }
      break;
    }
    case SchedulingKind::UniformRandomWalk: {
      Rng rng(config.seed);
      Vector p = box.midpoint();
      const Vector step = config.walk_step_frac * (box.hi - box.lo);
      for (int t = 0; t < config.horizon; ++t) {
        traj.samples.push_back(p);
        Vector next = p;
        for (int j = 0; j < np; ++j) next(j) += rng.uniform(-step(j), step(j));
        p = box.clip(next);
      }
      break;
    }
    case SchedulingKind::File: {
      traj = read_scheduling_csv(config.sched_file, np);
      if (traj.length() < config.horizon)
        throw StructuralError("gen_scheduling: file holds fewer samples than the horizon");
      traj.samples.resize(static_cast<size_t>(config.horizon));
      traj.validate_against(box, 1e-12);
      break;
    }
  }
  return traj;
}

std::vector<Vector> gen_input(const SimConfig& config, int nu) {
  std::vector<Vector> u;
  u.reserve(static_cast<size_t>(config.horizon));
  switch (config.input_kind) {
    case InputKind::Zero:
      for (int t = 0; t < config.horizon; ++t) u.push_back(Vector::Zero(nu));
      break;
    case InputKind::Prbs: {
      // Input stream seed is offset so noise and input draws never collide.
      Rng rng(derive_stream_seed(config.seed, 0x75627273ull));
      for (int t = 0; t < config.horizon; ++t) {
        Vector ut(nu);
        for (int j = 0; j < nu; ++j) ut(j) = rng.coin() ? config.input_amplitude : -config.input_amplitude;
        u.push_back(ut);
      }
      break;
    }
    case InputKind::Sinusoid:
      for (int t = 0; t < config.horizon; ++t) {
        Vector ut(nu);
        for (int j = 0; j < nu; ++j)
          ut(j) = config.input_amplitude * std::sin(config.input_omega * t + 0.5 * j);
        u.push_back(ut);
      }
      break;
    case InputKind::File: {
      u = read_input_csv(config.input_file, nu);
      if (static_cast<int>(u.size()) < config.horizon)
        throw StructuralError("gen_input: file holds fewer samples than the horizon");
      u.resize(static_cast<size_t>(config.horizon));
      break;
    }
  }
  return u;
}

NoiseDraws sample_noise(const NoiseSpec& noise, int n, std::uint64_t seed) {
  const Matrix sigma = noise.assembled();
  if (!is_positive_definite(symmetrized(sigma)))
    throw NumericalError("sample_noise: Sigma is not positive definite (min eigenvalue " +
                         std::to_string(min_eigenvalue(symmetrized(sigma))) + ")");
  const Matrix chol = lower_cholesky(sigma, "sample_noise: Sigma");
  const int nx = static_cast<int>(noise.Q.rows());
  const int ny = static_cast<int>(noise.R.rows());

  Rng rng(seed);
  NoiseDraws draws;
  draws.w.reserve(static_cast<size_t>(n));
  draws.v.reserve(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    const Vector joint = chol * rng.normal_vector(nx + ny);
    draws.w.push_back(joint.head(nx));
    draws.v.push_back(joint.tail(ny));
  }
  return draws;
}

SimRecord simulate_general(const LpvSsModel& model, const SchedulingTrajectory& traj,
                           const std::vector<Vector>& u, const NoiseDraws& noise,
                           const Vector& x0) {
  const size_t n = static_cast<size_t>(traj.length());
  if (u.size() != n || noise.w.size() != n || noise.v.size() != n)
    throw StructuralError("simulate_general: trajectory, input, and noise lengths must match");

  SimRecord rec;
  rec.t0 = traj.t0;
  Vector x = zero_or(x0, model.dims().nx, "simulate_general: x0");
  for (size_t k = 0; k < n; ++k) {
    const Vector& pt = traj.samples[k];
    rec.x.push_back(x);
    rec.u.push_back(u[k]);
    rec.p.push_back(pt);
    rec.w.push_back(noise.w[k]);
    rec.v.push_back(noise.v[k]);
    rec.y.push_back(model.c_at(pt) * x + model.d_at(pt) * u[k] + model.h_at(pt) * noise.v[k]);
    x = model.a_at(pt) * x + model.b_at(pt) * u[k] + model.g_at(pt) * noise.w[k];
  }
  return rec;
}

SimRecord simulate_innovation(const LpvSsModel& model, const SchedulingTrajectory& traj,
                              const std::vector<Vector>& u, const FilterTrace& trace,
                              const std::vector<Vector>& xi, const Vector& x0) {
  const size_t n = static_cast<size_t>(traj.length());
  if (u.size() != n || xi.size() != n || trace.gain.size() != n || trace.t0 != traj.t0)
    throw StructuralError("simulate_innovation: trajectory, input, trace, and draws must share length");

  SimRecord rec;
  rec.t0 = traj.t0;
  Vector x = zero_or(x0, model.dims().nx, "simulate_innovation: x0");
  for (size_t k = 0; k < n; ++k) {
    const Vector& pt = traj.samples[k];
    rec.x.push_back(x);
    rec.u.push_back(u[k]);
    rec.p.push_back(pt);
    rec.xi.push_back(xi[k]);
    rec.y.push_back(model.c_at(pt) * x + model.d_at(pt) * u[k] + xi[k]);
    x = model.a_at(pt) * x + model.b_at(pt) * u[k] + trace.gain[k] * xi[k];
  }
  return rec;
}

SimRecord simulate_innovation(const LpvSsModel& model, const SchedulingTrajectory& traj,
                              const std::vector<Vector>& u, const FilterTrace& trace,
                              std::uint64_t seed, const Vector& x0) {
  const int ny = model.dims().ny;
  Rng rng(seed);
  std::vector<Vector> xi;
  xi.reserve(trace.gain.size());
  for (size_t k = 0; k < trace.gain.size(); ++k) {
    const Matrix chol = lower_cholesky(
        trace.innov_cov[k], ("simulate_innovation: Omega at t=" +
                             std::to_string(trace.t0 + static_cast<int>(k)))
                                .c_str());
    xi.push_back(chol * rng.normal_vector(ny));
  }
  return simulate_innovation(model, traj, u, trace, xi, x0);
}

double replay_output_error(const LpvSsModel& model, const SimRecord& record) {
  double worst = 0.0;
  for (size_t k = 0; k < record.y.size(); ++k) {
    const Vector& pt = record.p[k];
    Vector expected = model.c_at(pt) * record.x[k] + model.d_at(pt) * record.u[k];
    if (!record.v.empty())
      expected += model.h_at(pt) * record.v[k];
    else if (!record.xi.empty())
      expected += record.xi[k];
    worst = std::max(worst, (record.y[k] - expected).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace lpvss
