#pragma once

#include <string>
#include <vector>

#include "lpvss/matrix_function.hpp"

namespace lpvss {

struct Dims {
  int nx = 0;  ///< state
  int nu = 0;  ///< input
  int ny = 0;  ///< output
  int np = 0;  ///< scheduling
};

/// Joint covariance of the process/measurement noise pair,
/// Sigma = [[Q, S], [S', R]]. Required positive definite.
struct NoiseSpec {
  Matrix Q;
  Matrix S;
  Matrix R;

  Matrix assembled() const;
  bool uncorrelated() const { return S.isZero(0.0); }
};

/// Discrete-time LPV state-space model with general noise:
///   x_{t+1} = A(p_t) x_t + B(p_t) u_t + G(p_t) w_t
///   y_t     = C(p_t) x_t + D(p_t) u_t + H(p_t) v_t
/// with all six matrix functions affine in the basis functions of p_t.
/// Immutable after construction; the constructor enforces shape consistency.
class LpvSsModel {
 public:
  LpvSsModel(Dims dims, AffineMatrixFunction a, AffineMatrixFunction b, AffineMatrixFunction c,
             AffineMatrixFunction d, AffineMatrixFunction g, AffineMatrixFunction h,
             NoiseSpec noise, std::vector<BasisFunction> basis, SchedulingBox scheduling_set);

  const Dims& dims() const { return dims_; }
  const NoiseSpec& noise() const { return noise_; }
  const std::vector<BasisFunction>& basis() const { return basis_; }
  const SchedulingBox& scheduling_set() const { return box_; }

  const AffineMatrixFunction& a() const { return a_; }
  const AffineMatrixFunction& b() const { return b_; }
  const AffineMatrixFunction& c() const { return c_; }
  const AffineMatrixFunction& d() const { return d_; }
  const AffineMatrixFunction& g() const { return g_; }
  const AffineMatrixFunction& h() const { return h_; }

  Matrix a_at(const Vector& p) const { return a_.eval(basis_, p); }
  Matrix b_at(const Vector& p) const { return b_.eval(basis_, p); }
  Matrix c_at(const Vector& p) const { return c_.eval(basis_, p); }
  Matrix d_at(const Vector& p) const { return d_.eval(basis_, p); }
  Matrix g_at(const Vector& p) const { return g_.eval(basis_, p); }
  Matrix h_at(const Vector& p) const { return h_.eval(basis_, p); }

 private:
  Dims dims_;
  AffineMatrixFunction a_, b_, c_, d_, g_, h_;
  NoiseSpec noise_;
  std::vector<BasisFunction> basis_;
  SchedulingBox box_;
};

/// Finite scheduling trajectory p_{t0}, ..., p_{t0+N-1}.
struct SchedulingTrajectory {
  int t0 = 0;
  std::vector<Vector> samples;

  int length() const { return static_cast<int>(samples.size()); }
  int end_time() const { return t0 + length(); }  ///< one past the last index
  const Vector& at_time(int t) const { return samples.at(static_cast<size_t>(t - t0)); }

  /// Every sample must lie inside the box.
  void validate_against(const SchedulingBox& box, double tol = 0.0) const;
};

/// Sampled structural checks: Sigma positive definite, H(p) invertible on the
/// grid, basis functions within their declared bounds. Carries verdicts, never
/// throws.
struct ValidationReport {
  bool sigma_pd = false;
  double sigma_min_eig = 0.0;
  double sigma_trace = 0.0;

  bool h_invertible = false;
  double h_min_sv = 0.0;           ///< min over grid of smallest singular value of H(p)
  Vector h_worst_point;            ///< grid point attaining h_min_sv
  std::vector<double> h_min_sv_per_point;

  bool basis_bounded = false;
  std::vector<double> basis_max_abs;  ///< max |psi_i| seen on grid
  std::vector<double> basis_bound;    ///< declared/derived bound per psi_i

  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_model(const LpvSsModel& model, const std::vector<Vector>& grid);

/// Uniform grid over the scheduling box (points_per_axis^np points).
std::vector<Vector> scheduling_grid(const SchedulingBox& box, int points_per_axis);

/// State equation rewritten so the process noise is uncorrelated with the
/// measurement noise:
///   x_{t+1} = Abar_t x_t + Bbar_t [u_t; y_t] + G(p_t) wbar_t,
///   Abar = A - G S R^-1 H^-1 C,   Qbar = Q - S R^-1 S'  (= cov of wbar).
struct DecorrelatedParts {
  Matrix abar;  ///< n_x x n_x
  Matrix bbar;  ///< n_x x (n_u + n_y), acting on the stacked [u; y]
  Matrix qbar;  ///< n_x x n_x
};

/// Throws NumericalError naming the scheduling point if H(p) is singular, or
/// if R is not positive definite.
DecorrelatedParts decorrelate_at(const LpvSsModel& model, const Vector& p);

struct DecorrelatedPoint {
  Matrix abar;
  Matrix bbar;
  Matrix qbar;
  Vector ubar;  ///< [u; y]
};

DecorrelatedPoint decorrelate(const LpvSsModel& model, const Vector& p, const Vector& u,
                              const Vector& y);

std::string format_point(const Vector& p);

}  // namespace lpvss
