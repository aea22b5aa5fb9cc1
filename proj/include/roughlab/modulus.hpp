#pragma once

#include <memory>
#include <string>
#include <vector>

namespace roughlab {

/// Modulus of continuity m on (0,1]. Leaves are t^a, (ln(c/t))^-a,
/// (ln ln(c/t))^-a and the constant 1; products nest.
class ModulusFn {
 public:
  enum class Kind { power, log_power, iterated_log, product, constant };

  static ModulusFn power(double a);
  static ModulusFn log_power(double a, double c);
  static ModulusFn iterated_log(double a, double c);
  static ModulusFn product(const ModulusFn& m1, const ModulusFn& m2);
  static ModulusFn constant();

  Kind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double c() const noexcept { return c_; }

  /// m(t) for t > 0.
  double operator()(double t) const;
  /// m(e^{-u}) for u >= 0, evaluated without forming e^{-u} where possible.
  double at_log(double u) const;

  /// Leaf factors of a (possibly nested) product.
  std::vector<ModulusFn> factors() const;

  /// m(0+) = 0 and m(1) <= 1: the hypotheses of the extended Young bound.
  bool admissible() const;

  std::string describe() const;

 private:
  ModulusFn(Kind k, double a, double c) : kind_(k), a_(a), c_(c) {}

  Kind kind_;
  double a_ = 0.0;
  double c_ = 0.0;
  std::shared_ptr<const ModulusFn> lhs_, rhs_;
};

}  // namespace roughlab
