#include "lpvss/basis.hpp"

#include <cmath>
#include <sstream>

namespace lpvss {

BasisFunction BasisFunction::identity(int component) {
  if (component < 1) throw StructuralError("basis: identity component must be >= 1");
  BasisFunction f;
  f.kind_ = Kind::Identity;
  f.component_ = component;
  return f;
}

BasisFunction BasisFunction::monomial(std::vector<int> exponents) {
  for (int e : exponents)
    if (e < 0) throw StructuralError("basis: monomial exponents must be non-negative");
  BasisFunction f;
  f.kind_ = Kind::Monomial;
  f.exponents_ = std::move(exponents);
  return f;
}

BasisFunction BasisFunction::constant(double value) {
  if (!std::isfinite(value)) throw StructuralError("basis: constant must be finite");
  BasisFunction f;
  f.kind_ = Kind::Constant;
  f.value_ = value;
  return f;
}

namespace {
double powi(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}
}  // namespace

double BasisFunction::operator()(const Vector& p) const {
  switch (kind_) {
    case Kind::Identity:
      if (component_ > p.size())
        throw StructuralError("basis: identity component " + std::to_string(component_) +
                              " exceeds scheduling dimension " + std::to_string(p.size()));
      return p(component_ - 1);
    case Kind::Monomial: {
      if (static_cast<int>(exponents_.size()) != p.size())
        throw StructuralError("basis: monomial exponent list length does not match scheduling dimension");
      double r = 1.0;
      for (int j = 0; j < p.size(); ++j) r *= powi(p(j), exponents_[j]);
      return r;
    }
    case Kind::Constant:
      return value_;
  }
  throw StructuralError("basis: unknown kind");
}

double BasisFunction::bound_on(const SchedulingBox& box) const {
  if (declared_bound_) return *declared_bound_;
  switch (kind_) {
    case Kind::Identity: {
      if (component_ > box.dim())
        throw StructuralError("basis: identity component exceeds scheduling dimension");
      const int j = component_ - 1;
      return std::max(std::abs(box.lo(j)), std::abs(box.hi(j)));
    }
    case Kind::Monomial: {
      // |prod p_j^e_j| <= prod max(|lo_j|, |hi_j|)^e_j, attained at a corner.
      double r = 1.0;
      for (int j = 0; j < box.dim() && j < static_cast<int>(exponents_.size()); ++j)
        r *= powi(std::max(std::abs(box.lo(j)), std::abs(box.hi(j))), exponents_[j]);
      return r;
    }
    case Kind::Constant:
      return std::abs(value_);
  }
  throw StructuralError("basis: unknown kind");
}

std::string BasisFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Identity:
      os << "p_" << component_;
      break;
    case Kind::Monomial: {
      os << "monomial(";
      for (size_t j = 0; j < exponents_.size(); ++j) os << (j ? "," : "") << exponents_[j];
      os << ")";
      break;
    }
    case Kind::Constant:
      os << "const(" << value_ << ")";
      break;
  }
  return os.str();
}

}  // namespace lpvss
