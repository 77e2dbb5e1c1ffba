#pragma once

#include <vector>

#include "lpvss/basis.hpp"
#include "lpvss/types.hpp"

namespace lpvss {

/// One scheduling-dependent term M_i * psi_i(p). Index is 1-based into the
/// model's basis list.
struct AffineTerm {
  int basis_index = 1;
  Matrix coeff;
};

/// Matrix-valued function M(p) = M0 + sum_i M_i psi_i(p). All coefficient
/// matrices share M0's shape; evaluation is the exact affine combination.
class AffineMatrixFunction {
 public:
  AffineMatrixFunction() = default;
  AffineMatrixFunction(Matrix m0, std::vector<AffineTerm> terms);

  static AffineMatrixFunction constant(Matrix m0) { return AffineMatrixFunction(std::move(m0), {}); }

  Eigen::Index rows() const { return m0_.rows(); }
  Eigen::Index cols() const { return m0_.cols(); }

  Matrix eval(const std::vector<BasisFunction>& basis, const Vector& p) const;

  bool is_constant() const { return terms_.empty(); }
  const Matrix& offset() const { return m0_; }
  const std::vector<AffineTerm>& terms() const { return terms_; }

 private:
  Matrix m0_;
  std::vector<AffineTerm> terms_;
};

}  // namespace lpvss
