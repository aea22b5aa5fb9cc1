#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "roughlab/errors.hpp"

namespace roughlab {

inline constexpr double kAbsTol = 1e-12;
inline constexpr std::size_t kMaxDim = 64;

using Point = std::vector<double>;

double norm(std::span<const double> v);

/// Time grid on [0,T] with d-dimensional samples. Between samples the path
/// is the linear interpolant.
class SampledPath {
 public:
  SampledPath(std::vector<double> times, std::vector<double> flat_values,
              std::size_t dim);

  static SampledPath from_points(std::vector<double> times,
                                 const std::vector<Point>& points);
  static SampledPath from_scalar(std::vector<double> times,
                                 const std::vector<double>& values);

  std::size_t size() const noexcept { return times_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  double horizon() const noexcept { return times_.back(); }
  double time(std::size_t i) const { return times_[i]; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& flat() const noexcept { return values_; }

  std::span<const double> point(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  double value(std::size_t i, std::size_t c) const {
    return values_[i * dim_ + c];
  }

  /// Piecewise-linear evaluation at t in [0,T].
  Point eval(double t) const;

  /// Grid index whose time equals t within kAbsTol.
  std::size_t index_of(double t) const;

  SampledPath scaled(double lambda) const;
  SampledPath with_times(std::vector<double> times) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::size_t dim_;
};

/// Sorted index subset of a grid containing both endpoints.
class Partition {
 public:
  Partition(std::vector<std::size_t> indices, std::size_t grid_size);
  static Partition full(std::size_t grid_size);

  std::size_t size() const noexcept { return idx_.size(); }
  std::size_t operator[](std::size_t k) const { return idx_[k]; }
  std::size_t grid_size() const noexcept { return grid_size_; }
  const std::vector<std::size_t>& indices() const noexcept { return idx_; }

  double mesh(const SampledPath& path) const;
  bool is_subset_of(const Partition& other) const;

 private:
  std::vector<std::size_t> idx_;
  std::size_t grid_size_;
};

/// Dense rows x cols matrix. Square for brackets and areas, d1 x d2 for
/// iterated integrals of two different paths.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Tensor2 outer(std::span<const double> u, std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }
  const std::vector<double>& data() const noexcept { return a_; }

  Tensor2& operator+=(const Tensor2& o);
  Tensor2& operator-=(const Tensor2& o);
  Tensor2& operator*=(double s);
  friend Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
  friend Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
  friend Tensor2 operator*(Tensor2 a, double s) { return a *= s; }
  friend Tensor2 operator*(double s, Tensor2 a) { return a *= s; }

  Tensor2 transpose() const;
  Tensor2 antisymmetric_part() const;
  double frobenius() const;
  bool is_antisymmetric() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

double dot(const Tensor2& a, const Tensor2& b);

/// Two-parameter function on grid index pairs (i <= j), alpha(i,i) = 0.
using TwoParamFn = std::function<Tensor2(std::size_t, std::size_t)>;

Point increment(const SampledPath& path, std::size_t i, std::size_t j);
Tensor2 lie_bracket(std::span<const double> u, std::span<const double> v);

/// gamma^D as a path on D's times.
SampledPath restrict(const SampledPath& path, const Partition& D);

/// Piecewise-linear path evaluated on another time grid in [0,T].
SampledPath interpolate_onto(const SampledPath& path,
                             const std::vector<double>& times);

/// Pointwise difference of two paths on the same grid.
SampledPath difference(const SampledPath& a, const SampledPath& b);

/// Indices of t_l = l * T * 4^{-N}, l = 0..4^N.
Partition dyadic_partition(const SampledPath& path, int N);

/// Uniform grid of n points on [0,T].
std::vector<double> uniform_times(std::size_t n, double T = 1.0);
/// Grid t_l = l * 4^{-N} on [0,1].
std::vector<double> dyadic_times(int N);

std::string format_real(double x);

SampledPath read_csv(std::istream& in);
SampledPath read_csv_file(const std::string& file);
void write_csv(std::ostream& out, const SampledPath& path);

}  // namespace roughlab
