#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpvss/types.hpp"

namespace lpvss {

/// Axis-aligned box of admissible scheduling points.
struct SchedulingBox {
  Vector lo;
  Vector hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool valid() const { return lo.size() == hi.size() && lo.size() > 0 && (lo.array() <= hi.array()).all(); }
  bool contains(const Vector& p, double tol = 0.0) const {
    return p.size() == lo.size() && (p.array() >= lo.array() - tol).all() &&
           (p.array() <= hi.array() + tol).all();
  }
  Vector midpoint() const { return 0.5 * (lo + hi); }
  Vector halfwidth() const { return 0.5 * (hi - lo); }
  Vector clip(const Vector& p) const { return p.cwiseMax(lo).cwiseMin(hi); }
};

/// One bounded scalar function of the scheduling point. Instances come from a
/// small registry of kinds: a scheduling component itself, a monomial in the
/// components, or a constant. An explicit bound may override the one derived
/// from the box.
class BasisFunction {
 public:
  enum class Kind { Identity, Monomial, Constant };

  /// psi(p) = p[component] (component is 1-based, matching file headers).
  static BasisFunction identity(int component);
  /// psi(p) = prod_j p[j]^exponents[j] with non-negative integer exponents.
  static BasisFunction monomial(std::vector<int> exponents);
  /// psi(p) = value.
  static BasisFunction constant(double value);

  double operator()(const Vector& p) const;

  /// Tight upper bound for |psi| over the box (corner maximum for monomials),
  /// unless the user declared one explicitly.
  double bound_on(const SchedulingBox& box) const;

  void set_declared_bound(double b) { declared_bound_ = b; }
  std::optional<double> declared_bound() const { return declared_bound_; }

  Kind kind() const { return kind_; }
  int component() const { return component_; }
  const std::vector<int>& exponents() const { return exponents_; }
  double value() const { return value_; }
  std::string describe() const;

 private:
  BasisFunction() = default;
  Kind kind_ = Kind::Constant;
  int component_ = 1;
  std::vector<int> exponents_;
  double value_ = 0.0;
  std::optional<double> declared_bound_;
};

}  // namespace lpvss
