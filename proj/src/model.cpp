#include "lpvss/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lpvss {

Matrix NoiseSpec::assembled() const {
  const Eigen::Index nx = Q.rows();
  const Eigen::Index ny = R.rows();
  Matrix sigma(nx + ny, nx + ny);
  sigma.topLeftCorner(nx, nx) = Q;
  sigma.topRightCorner(nx, ny) = S;
  sigma.bottomLeftCorner(ny, nx) = S.transpose();
  sigma.bottomRightCorner(ny, ny) = R;
  return sigma;
}

namespace {
void require_shape(const AffineMatrixFunction& f, Eigen::Index rows, Eigen::Index cols,
                   const char* name) {
  if (f.rows() != rows || f.cols() != cols)
    throw StructuralError(std::string("model: ") + name + " has shape " +
                          std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                          ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}
}  // namespace

LpvSsModel::LpvSsModel(Dims dims, AffineMatrixFunction a, AffineMatrixFunction b,
                       AffineMatrixFunction c, AffineMatrixFunction d, AffineMatrixFunction g,
                       AffineMatrixFunction h, NoiseSpec noise, std::vector<BasisFunction> basis,
                       SchedulingBox scheduling_set)
    : dims_(dims),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      g_(std::move(g)),
      h_(std::move(h)),
      noise_(std::move(noise)),
      basis_(std::move(basis)),
      box_(std::move(scheduling_set)) {
  if (dims_.nx < 1 || dims_.nu < 0 || dims_.ny < 1 || dims_.np < 1)
    throw StructuralError("model: dims must satisfy nx >= 1, nu >= 0, ny >= 1, np >= 1");
  require_shape(a_, dims_.nx, dims_.nx, "A");
  require_shape(b_, dims_.nx, dims_.nu, "B");
  require_shape(c_, dims_.ny, dims_.nx, "C");
  require_shape(d_, dims_.ny, dims_.nu, "D");
  require_shape(g_, dims_.nx, dims_.nx, "G");
  require_shape(h_, dims_.ny, dims_.ny, "H");
  if (noise_.Q.rows() != dims_.nx || noise_.Q.cols() != dims_.nx)
    throw StructuralError("model: Q must be nx x nx");
  if (noise_.S.rows() != dims_.nx || noise_.S.cols() != dims_.ny)
    throw StructuralError("model: S must be nx x ny");
  if (noise_.R.rows() != dims_.ny || noise_.R.cols() != dims_.ny)
    throw StructuralError("model: R must be ny x ny");
  if (!box_.valid() || box_.dim() != dims_.np)
    throw StructuralError("model: scheduling set must be a non-empty box of dimension np");
  for (const AffineMatrixFunction* f : {&a_, &b_, &c_, &d_, &g_, &h_})
    for (const AffineTerm& t : f->terms())
      if (t.basis_index > static_cast<int>(basis_.size()))
        throw StructuralError("model: matrix term references basis index " +
                              std::to_string(t.basis_index) + " but only " +
                              std::to_string(basis_.size()) + " basis functions are declared");
}

void SchedulingTrajectory::validate_against(const SchedulingBox& box, double tol) const {
  for (int k = 0; k < length(); ++k)
    if (!box.contains(samples[static_cast<size_t>(k)], tol))
      throw StructuralError("scheduling trajectory: sample at t=" + std::to_string(t0 + k) +
                            " lies outside the scheduling set: " +
                            format_point(samples[static_cast<size_t>(k)]));
}

std::string format_point(const Vector& p) {
  std::ostringstream os;
  os << "(";
  for (int j = 0; j < p.size(); ++j) os << (j ? ", " : "") << p(j);
  os << ")";
  return os.str();
}

std::vector<Vector> scheduling_grid(const SchedulingBox& box, int points_per_axis) {
  if (points_per_axis < 1) throw StructuralError("scheduling grid: need at least one point per axis");
  const int np = box.dim();
  std::vector<Vector> grid;
  std::vector<int> idx(static_cast<size_t>(np), 0);
  while (true) {
    Vector p(np);
    for (int j = 0; j < np; ++j) {
      const double f = points_per_axis == 1 ? 0.5
                                            : static_cast<double>(idx[static_cast<size_t>(j)]) /
                                                  (points_per_axis - 1);
      p(j) = box.lo(j) + f * (box.hi(j) - box.lo(j));
    }
    grid.push_back(std::move(p));
    int j = 0;
    for (; j < np; ++j) {
      if (++idx[static_cast<size_t>(j)] < points_per_axis) break;
      idx[static_cast<size_t>(j)] = 0;
    }
    if (j == np) break;
  }
  return grid;
}

ValidationReport validate_model(const LpvSsModel& model, const std::vector<Vector>& grid) {
  if (grid.empty()) throw StructuralError("validate_model: grid must be nonempty");
  ValidationReport rep;

  const Matrix sigma = model.noise().assembled();
  rep.sigma_trace = sigma.trace();
  rep.sigma_min_eig = min_eigenvalue(symmetrized(sigma));
  rep.sigma_pd = rep.sigma_min_eig > kCovarianceTol * std::max(rep.sigma_trace, 1.0);
  if (!rep.sigma_pd) {
    std::ostringstream os;
    os << "noise covariance Sigma is not positive definite (min eigenvalue " << rep.sigma_min_eig
       << ")";
    rep.violations.push_back(os.str());
  }

  rep.h_min_sv = std::numeric_limits<double>::infinity();
  const size_t n_psi = model.basis().size();
  rep.basis_max_abs.assign(n_psi, 0.0);
  rep.basis_bound.resize(n_psi);
  for (size_t i = 0; i < n_psi; ++i) rep.basis_bound[i] = model.basis()[i].bound_on(model.scheduling_set());

  for (const Vector& p : grid) {
    const double sv = min_singular_value(model.h_at(p));
    rep.h_min_sv_per_point.push_back(sv);
    if (sv < rep.h_min_sv) {
      rep.h_min_sv = sv;
      rep.h_worst_point = p;
    }
    for (size_t i = 0; i < n_psi; ++i)
      rep.basis_max_abs[i] = std::max(rep.basis_max_abs[i], std::abs(model.basis()[i](p)));
  }
  rep.h_invertible = rep.h_min_sv > kCovarianceTol;
  if (!rep.h_invertible) {
    std::ostringstream os;
    os << "H(p) is singular at p=" << format_point(rep.h_worst_point) << " (min singular value "
       << rep.h_min_sv << "); the decorrelation transform is unavailable there";
    rep.violations.push_back(os.str());
  }

  rep.basis_bounded = true;
  for (size_t i = 0; i < n_psi; ++i) {
    if (rep.basis_max_abs[i] > rep.basis_bound[i] * (1.0 + 1e-12)) {
      rep.basis_bounded = false;
      std::ostringstream os;
      os << "basis function " << i + 1 << " (" << model.basis()[i].describe() << ") exceeds its bound: |psi|="
         << rep.basis_max_abs[i] << " > " << rep.basis_bound[i];
      rep.violations.push_back(os.str());
    }
  }
  return rep;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "Sigma PD: " << (sigma_pd ? "pass" : "FAIL") << " (min eig " << sigma_min_eig << ")\n";
  os << "H(p) invertible on grid: " << (h_invertible ? "pass" : "FAIL") << " (min sv " << h_min_sv
     << ")\n";
  os << "basis bounded: " << (basis_bounded ? "pass" : "FAIL") << "\n";
  for (const std::string& v : violations) os << "violation: " << v << "\n";
  return os.str();
}

DecorrelatedParts decorrelate_at(const LpvSsModel& model, const Vector& p) {
  const Matrix& r = model.noise().R;
  const Matrix& s = model.noise().S;
  const Matrix& q = model.noise().Q;
  if (!is_positive_definite(symmetrized(r)))
    throw NumericalError("decorrelate: R is not positive definite");

  const Matrix h = model.h_at(p);
  Eigen::JacobiSVD<Matrix> h_svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sv_min = h_svd.singularValues().minCoeff();
  const double sv_max = h_svd.singularValues().maxCoeff();
  if (sv_min <= kCovarianceTol * std::max(sv_max, 1.0))
    throw NumericalError("decorrelate: H(p) singular at p=" + format_point(p) +
                         " (min singular value " + std::to_string(sv_min) + ")");

  const Matrix r_inv = invert_spd(symmetrized(r)).inverse;
  const Matrix h_inv = h_svd.solve(Matrix::Identity(h.rows(), h.cols()));
  const Matrix feed = model.g_at(p) * s * r_inv * h_inv;  // G S R^-1 H^-1

  DecorrelatedParts parts;
  parts.abar = model.a_at(p) - feed * model.c_at(p);
  parts.bbar.resize(model.dims().nx, model.dims().nu + model.dims().ny);
  parts.bbar.leftCols(model.dims().nu) = model.b_at(p) - feed * model.d_at(p);
  parts.bbar.rightCols(model.dims().ny) = feed;
  parts.qbar = symmetrized(q - s * r_inv * s.transpose());
  return parts;
}

DecorrelatedPoint decorrelate(const LpvSsModel& model, const Vector& p, const Vector& u,
                              const Vector& y) {
  if (u.size() != model.dims().nu || y.size() != model.dims().ny)
    throw StructuralError("decorrelate: input/output dimensions do not match the model");
  DecorrelatedParts parts = decorrelate_at(model, p);
  DecorrelatedPoint out;
  out.abar = std::move(parts.abar);
  out.bbar = std::move(parts.bbar);
  out.qbar = std::move(parts.qbar);
  out.ubar.resize(u.size() + y.size());
  out.ubar << u, y;
  return out;
}

}  // namespace lpvss
