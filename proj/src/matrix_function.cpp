#include "lpvss/matrix_function.hpp"

#include <string>

namespace lpvss {

AffineMatrixFunction::AffineMatrixFunction(Matrix m0, std::vector<AffineTerm> terms)
    : m0_(std::move(m0)), terms_(std::move(terms)) {
  for (const AffineTerm& t : terms_) {
    if (t.coeff.rows() != m0_.rows() || t.coeff.cols() != m0_.cols())
      throw StructuralError("affine matrix function: coefficient for basis index " +
                            std::to_string(t.basis_index) + " has shape " +
                            std::to_string(t.coeff.rows()) + "x" + std::to_string(t.coeff.cols()) +
                            ", expected " + std::to_string(m0_.rows()) + "x" +
                            std::to_string(m0_.cols()));
    if (t.basis_index < 1)
      throw StructuralError("affine matrix function: basis index must be >= 1");
  }
}

Matrix AffineMatrixFunction::eval(const std::vector<BasisFunction>& basis, const Vector& p) const {
  Matrix m = m0_;
  for (const AffineTerm& t : terms_) {
    if (t.basis_index > static_cast<int>(basis.size()))
      throw StructuralError("affine matrix function: basis index " +
                            std::to_string(t.basis_index) + " out of range (n_psi = " +
                            std::to_string(basis.size()) + ")");
    m.noalias() += t.coeff * basis[t.basis_index - 1](p);
  }
  return m;
}

}  // namespace lpvss
