#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "roughlab/path_core.hpp"

namespace roughlab {

/// Levy area of the piecewise-linear path between grid indices s <= t.
Tensor2 area_pl(const SampledPath& path, std::size_t s, std::size_t t);
Tensor2 area_pl_at(const SampledPath& path, double s, double t);

/// Iterated integral over s < u1 < u2 < t of d(gamma1) (x) d(gamma2) for two
/// piecewise-linear paths on one grid.
Tensor2 iterated_integral_pl(const SampledPath& path1,
                             const SampledPath& path2, std::size_t s,
                             std::size_t t);

/// Sum over D of [gamma(t_k), gamma(t_{k+1})].
Tensor2 riemann_bracket_sum(const SampledPath& path, const Partition& D);

enum class RiemannRule { left, trapezoid };

/// Sum over D of r_k (x) (gamma2(t_{k+1}) - gamma2(t_k)) with r_k the left
/// value or the mean of the endpoint values of gamma1.
Tensor2 riemann_sum(const SampledPath& path1, const SampledPath& path2,
                    const Partition& D, RiemannRule rule);

/// |alpha(s,t) - alpha(s,u) - alpha(u,t) - 1/2 [gamma(u)-gamma(s), gamma(t)-gamma(u)]|
double chen_defect(const TwoParamFn& alpha, const SampledPath& path,
                   std::size_t s, std::size_t u, std::size_t t);

/// Prefix-sum form of area_pl: O(d^2) per pair after O(n d^2) setup.
class AreaTable {
 public:
  explicit AreaTable(const SampledPath& path);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  Tensor2 operator()(std::size_t i, std::size_t j) const;
  /// Frobenius norm of A(i,j) without building the matrix.
  double norm(std::size_t i, std::size_t j) const {
    if (m_ == 1) return std::numbers::sqrt2 * std::abs(entry(i, j, 0));
    double s = 0.0;
    for (std::size_t q = 0; q < m_; ++q) {
      const double x = entry(i, j, q);
      s += x * x;
    }
    return std::sqrt(2.0 * s);
  }
  /// Frobenius norm of A(i,j) - other(i,j), both tables on one grid.
  double diff_norm(const AreaTable& other, std::size_t i, std::size_t j) const {
    if (m_ == 1)
      return std::numbers::sqrt2 * std::abs(entry(i, j, 0) - other.entry(i, j, 0));
    double s = 0.0;
    for (std::size_t q = 0; q < m_; ++q) {
      const double x = entry(i, j, q) - other.entry(i, j, q);
      s += x * x;
    }
    return std::sqrt(2.0 * s);
  }
  /// out[i] = norm(i, j) for i < j.
  void norm_row(std::size_t j, double* out) const;
  /// out[i] = diff_norm(other, i, j) for i < j.
  void diff_norm_row(const AreaTable& other, std::size_t j, double* out) const;

 private:
  // Inline: the variation DPs call this O(n^2) times.
  double entry(std::size_t i, std::size_t j, std::size_t q) const {
    const double* u = &y_[i * d_];
    const double* v = &y_[j * d_];
    const std::size_t a = pa_[q], b = pb_[q];
    return 0.5 * (prefix_[j * m_ + q] - prefix_[i * m_ + q]) -
           0.5 * (u[a] * v[b] - v[a] * u[b]);
  }

  std::size_t n_, d_, m_;
  std::vector<std::size_t> pa_, pb_;
  std::vector<double> y_;
  std::vector<double> prefix_;
};

/// Prefix-sum form of iterated_integral_pl.
class IteratedTable {
 public:
  IteratedTable(const SampledPath& path1, const SampledPath& path2);

  std::size_t size() const noexcept { return n_; }
  Tensor2 operator()(std::size_t i, std::size_t j) const;
  double diff_norm(const IteratedTable& other, std::size_t i,
                   std::size_t j) const;
  /// out[i] = diff_norm(other, i, j) for i < j.
  void diff_norm_row(const IteratedTable& other, std::size_t j,
                     double* out) const;

 private:
  double entry(std::size_t i, std::size_t j, std::size_t a,
               std::size_t b) const;

  std::size_t n_, d1_, d2_;
  std::vector<double> y1_, y2_;
  std::vector<double> prefix_;
};

struct TrigTerm {
  double coefficient;
  double frequency;  // cycles per unit time, may be negative
  double phase = 0.0;
};

/// sum_k a_k exp(i(2 pi w_k t + phi_k)) with Re on axis `re_axis` and Im
/// on axis `im_axis` of R^dim.
class TrigPath {
 public:
  explicit TrigPath(std::vector<TrigTerm> terms, std::size_t re_axis = 0,
                    std::size_t im_axis = 1, std::size_t dim = 2);

  const std::vector<TrigTerm>& terms() const noexcept { return terms_; }
  std::size_t dim() const noexcept { return dim_; }

  Point eval(double t) const;
  /// Entry (re_axis, im_axis) of the area over [s,t].
  double area_entry(double s, double t) const;
  SampledPath sample(const std::vector<double>& times) const;

  std::size_t re_axis() const noexcept { return re_; }
  std::size_t im_axis() const noexcept { return im_; }

 private:
  double phase_at(std::size_t k, double t) const;

  std::vector<TrigTerm> terms_;
  std::size_t re_, im_, dim_;
};

/// Exact area of a trigonometric path, no quadrature.
Tensor2 trig_area(const TrigPath& spec, double s, double t);

}  // namespace roughlab
