#pragma once

// Model builders shared by the unit suites and the acceptance runner.

#include <vector>

#include "lpvss/model.hpp"
#include "lpvss/rng.hpp"
#include "lpvss/simulate.hpp"

namespace lpvss::testing {

/// Scalar model with one identity basis function; any coefficient may carry a
/// p-dependent term through a1/c1/... set to nonzero.
struct ScalarSpec {
  double a = 0.5, b = 1.0, c = 1.0, d = 0.0, g = 1.0, h = 1.0;
  double a1 = 0.0, c1 = 0.0;  ///< coefficients of psi(p) = p
  double q = 1.0, s = 0.0, r = 1.0;
  double p_lo = -1.0, p_hi = 1.0;
};

inline LpvSsModel make_scalar_model(const ScalarSpec& spec = {}) {
  auto scalar = [](double v) { return (Matrix(1, 1) << v).finished(); };
  auto fn = [&](double m0, double m1) {
    std::vector<AffineTerm> terms;
    if (m1 != 0.0) terms.push_back({1, scalar(m1)});
    return AffineMatrixFunction(scalar(m0), std::move(terms));
  };
  NoiseSpec noise{scalar(spec.q), scalar(spec.s), scalar(spec.r)};
  SchedulingBox box{Vector::Constant(1, spec.p_lo), Vector::Constant(1, spec.p_hi)};
  return LpvSsModel({1, 1, 1, 1}, fn(spec.a, spec.a1), fn(spec.b, 0.0), fn(spec.c, spec.c1),
                    fn(spec.d, 0.0), fn(spec.g, 0.0), fn(spec.h, 0.0), std::move(noise),
                    {BasisFunction::identity(1)}, std::move(box));
}

/// Two-state, two-output model that keeps G Qbar G' and C'(HRH')^-1 C
/// uniformly positive definite and Abar invertible over p in [-1, 1], so the
/// restart bound applies. S is nonzero to exercise the decorrelation path.
inline LpvSsModel make_twostate_model() {
  Matrix a0(2, 2), a1(2, 2), c0(2, 2), c1(2, 2);
  a0 << 0.35, 0.15, -0.12, 0.45;
  a1 << 0.0, 0.1, 0.0, 0.0;
  c0 << 1.0, 0.0, 0.0, 1.0;
  c1 << 0.0, 0.15, 0.0, 0.0;
  Matrix b0(2, 1);
  b0 << 1.0, 0.5;
  Matrix q(2, 2), s(2, 2), r(2, 2);
  q << 0.8, 0.0, 0.0, 0.6;
  s << 0.1, 0.0, 0.0, 0.05;
  r << 0.5, 0.0, 0.0, 0.4;
  SchedulingBox box{Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)};
  return LpvSsModel({2, 1, 2, 1}, AffineMatrixFunction(a0, {{1, a1}}),
                    AffineMatrixFunction::constant(b0),
                    AffineMatrixFunction(c0, {{1, c1}}),
                    AffineMatrixFunction::constant(Matrix::Zero(2, 1)),
                    AffineMatrixFunction::constant(Matrix::Identity(2, 2)),
                    AffineMatrixFunction::constant(Matrix::Identity(2, 2)),
                    NoiseSpec{q, s, r}, {BasisFunction::identity(1)}, std::move(box));
}

/// Random model with bounded scheduling dependence: every matrix is
/// M0 + M1 p with ||M0|| + ||M1|| kept moderate and A scaled so the frozen
/// dynamics stay stable over p in [-1, 1]. Sigma is made strictly positive
/// definite; s_scale = 0 gives uncorrelated noise.
inline LpvSsModel random_model(Rng& rng, int nx, int nu, int ny, double p_dependence = 0.2,
                               double s_scale = 0.3) {
  auto randm = [&](int rows, int cols, double scale) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
    return m;
  };
  auto affine = [&](Matrix m0, Matrix m1) {
    return AffineMatrixFunction(std::move(m0), {{1, std::move(m1)}});
  };

  Matrix a0 = randm(nx, nx, 1.0);
  Matrix a1 = randm(nx, nx, p_dependence);
  // Keep sup_p ||A0 + A1 p||_2 <= 0.8 over |p| <= 1.
  const double gain = spectral_norm(a0) + spectral_norm(a1);
  if (gain > 0.0) {
    a0 *= 0.8 / gain;
    a1 *= 0.8 / gain;
  }

  Matrix h0 = Matrix::Identity(ny, ny) + randm(ny, ny, 0.1);

  Matrix lq = randm(nx, nx, 0.5);
  Matrix lr = randm(ny, ny, 0.5);
  Matrix q = lq * lq.transpose() + 0.5 * Matrix::Identity(nx, nx);
  Matrix r = lr * lr.transpose() + 0.5 * Matrix::Identity(ny, ny);
  Matrix s = randm(nx, ny, s_scale);
  // Shrink S until the Schur complement keeps Sigma positive definite.
  while (min_eigenvalue(symmetrized(q - s * invert_spd(r).inverse * s.transpose())) < 0.1)
    s *= 0.5;

  SchedulingBox box{Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)};
  return LpvSsModel({nx, nu, ny, 1}, affine(a0, a1),
                    affine(randm(nx, nu, 0.8), randm(nx, nu, p_dependence)),
                    affine(randm(ny, nx, 0.8), randm(ny, nx, p_dependence)),
                    affine(randm(ny, nu, 0.3), randm(ny, nu, p_dependence)),
                    AffineMatrixFunction::constant(Matrix::Identity(nx, nx) + randm(nx, nx, 0.1)),
                    AffineMatrixFunction::constant(std::move(h0)), NoiseSpec{q, s, r},
                    {BasisFunction::identity(1)}, std::move(box));
}

/// Random LTI model (no scheduling dependence), stable by construction.
inline LpvSsModel random_lti_model(Rng& rng, int nx, int nu, int ny, double s_scale = 0.3) {
  return random_model(rng, nx, nu, ny, 0.0, s_scale);
}

inline SchedulingTrajectory random_walk_trajectory(const LpvSsModel& model, int horizon,
                                                   std::uint64_t seed) {
  SimConfig cfg;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.sched_kind = SchedulingKind::UniformRandomWalk;
  return gen_scheduling(cfg, model.scheduling_set());
}

inline SchedulingTrajectory constant_trajectory(const LpvSsModel& model, int horizon,
                                                double value) {
  SimConfig cfg;
  cfg.horizon = horizon;
  cfg.sched_kind = SchedulingKind::Constant;
  cfg.sched_value = Vector::Constant(model.dims().np, value);
  return gen_scheduling(cfg, model.scheduling_set());
}

inline std::vector<Vector> zero_inputs(int n, int nu) {
  return std::vector<Vector>(static_cast<size_t>(n), Vector::Zero(nu));
}

inline std::vector<Vector> prbs_inputs(int n, int nu, std::uint64_t seed, double amplitude = 1.0) {
  Rng rng(seed);
  std::vector<Vector> u;
  u.reserve(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    Vector ut(nu);
    for (int j = 0; j < nu; ++j) ut(j) = rng.coin() ? amplitude : -amplitude;
    u.push_back(ut);
  }
  return u;
}

}  // namespace lpvss::testing
