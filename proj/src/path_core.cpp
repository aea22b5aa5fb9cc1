#include "roughlab/path_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace roughlab {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

SampledPath::SampledPath(std::vector<double> times,
                         std::vector<double> flat_values, std::size_t dim)
    : times_(std::move(times)), values_(std::move(flat_values)), dim_(dim) {
  if (dim_ == 0 || dim_ > kMaxDim)
    throw ValidationError("path dimension must be in [1, 64], got " +
                          std::to_string(dim_));
  if (times_.size() < 2)
    throw ValidationError("path needs at least 2 samples");
  if (values_.size() != times_.size() * dim_)
    throw ValidationError("path values do not match times x dim");
  if (std::abs(times_.front()) > kAbsTol)
    throw ValidationError("path times must start at 0");
  times_.front() = 0.0;
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]))
      throw ValidationError("path times not strictly increasing at sample " +
                            std::to_string(i));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite path value");
  }
}

SampledPath SampledPath::from_points(std::vector<double> times,
                                     const std::vector<Point>& points) {
  if (points.empty()) throw ValidationError("path needs at least 2 samples");
  const std::size_t d = points.front().size();
  std::vector<double> flat;
  flat.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.size() != d) throw ValidationError("ragged path values");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return SampledPath(std::move(times), std::move(flat), d);
}

SampledPath SampledPath::from_scalar(std::vector<double> times,
                                     const std::vector<double>& values) {
  return SampledPath(std::move(times), values, 1);
}

Point SampledPath::eval(double t) const {
  if (t < -kAbsTol || t > horizon() + kAbsTol)
    throw ValidationError("evaluation time outside [0,T]");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - times_.begin());
  if (j == 0) j = 1;
  if (j >= times_.size()) {
    auto p = point(times_.size() - 1);
    return Point(p.begin(), p.end());
  }
  const std::size_t i = j - 1;
  const double w = (t - times_[i]) / (times_[j] - times_[i]);
  Point out(dim_);
  for (std::size_t c = 0; c < dim_; ++c)
    out[c] = value(i, c) + w * (value(j, c) - value(i, c));
  return out;
}

std::size_t SampledPath::index_of(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t - kAbsTol);
  if (it == times_.end() || std::abs(*it - t) > kAbsTol)
    throw ValidationError("time " + format_real(t) + " is not a grid point");
  return static_cast<std::size_t>(it - times_.begin());
}

SampledPath SampledPath::scaled(double lambda) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= lambda;
  return SampledPath(times_, std::move(v), dim_);
}

SampledPath SampledPath::with_times(std::vector<double> times) const {
  if (times.size() != times_.size())
    throw ValidationError("reparametrized grid has wrong length");
  return SampledPath(std::move(times), values_, dim_);
}

Partition::Partition(std::vector<std::size_t> indices, std::size_t grid_size)
    : idx_(std::move(indices)), grid_size_(grid_size) {
  if (idx_.size() < 2) throw ValidationError("partition needs 2 indices");
  if (idx_.front() != 0 || idx_.back() + 1 != grid_size_)
    throw ValidationError("partition must contain both grid endpoints");
  for (std::size_t k = 1; k < idx_.size(); ++k) {
    if (idx_[k] <= idx_[k - 1])
      throw ValidationError("partition indices not strictly increasing");
  }
}

Partition Partition::full(std::size_t grid_size) {
  std::vector<std::size_t> idx(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) idx[i] = i;
  return Partition(std::move(idx), grid_size);
}

double Partition::mesh(const SampledPath& path) const {
  if (path.size() != grid_size_)
    throw ValidationError("partition does not belong to this grid");
  double m = 0.0;
  for (std::size_t k = 1; k < idx_.size(); ++k)
    m = std::max(m, path.time(idx_[k]) - path.time(idx_[k - 1]));
  return m;
}

bool Partition::is_subset_of(const Partition& other) const {
  return grid_size_ == other.grid_size_ &&
         std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(),
                       idx_.end());
}

Tensor2 Tensor2::outer(std::span<const double> u, std::span<const double> v) {
  Tensor2 t(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) t(i, j) = u[i] * v[j];
  return t;
}

Tensor2& Tensor2::operator+=(const Tensor2& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_)
    throw ValidationError("tensor shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Tensor2& Tensor2::operator-=(const Tensor2& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_)
    throw ValidationError("tensor shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Tensor2& Tensor2::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Tensor2 Tensor2::transpose() const {
  Tensor2 t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Tensor2 Tensor2::antisymmetric_part() const {
  if (rows_ != cols_) throw ValidationError("antisymmetric part needs square");
  Tensor2 t(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t(i, j) = 0.5 * ((*this)(i, j) - (*this)(j, i));
  return t;
}

double Tensor2::frobenius() const { return norm(a_); }

bool Tensor2::is_antisymmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != -(*this)(j, i)) return false;
  return true;
}

double dot(const Tensor2& a, const Tensor2& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("tensor shape mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    s += a.data()[k] * b.data()[k];
  return s;
}

Point increment(const SampledPath& path, std::size_t i, std::size_t j) {
  if (i > j || j >= path.size())
    throw ValidationError("increment indices out of range");
  Point d(path.dim());
  for (std::size_t c = 0; c < path.dim(); ++c)
    d[c] = path.value(j, c) - path.value(i, c);
  return d;
}

Tensor2 lie_bracket(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("bracket dimension mismatch");
  const std::size_t d = u.size();
  Tensor2 t(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double x = u[i] * v[j] - v[i] * u[j];
      t(i, j) = x;
      t(j, i) = -x;
    }
  }
  return t;
}

SampledPath restrict(const SampledPath& path, const Partition& D) {
  if (D.grid_size() != path.size())
    throw ValidationError("partition is not a sub-grid of this path");
  std::vector<double> times(D.size());
  std::vector<double> vals(D.size() * path.dim());
  for (std::size_t k = 0; k < D.size(); ++k) {
    times[k] = path.time(D[k]);
    auto p = path.point(D[k]);
    std::copy(p.begin(), p.end(), vals.begin() + k * path.dim());
  }
  return SampledPath(std::move(times), std::move(vals), path.dim());
}

SampledPath interpolate_onto(const SampledPath& path,
                             const std::vector<double>& times) {
  const std::size_t d = path.dim();
  std::vector<double> vals(times.size() * d);
  std::size_t seg = 1;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (t < -kAbsTol || t > path.horizon() + kAbsTol)
      throw ValidationError("interpolation time outside [0,T]");
    while (seg + 1 < path.size() && path.time(seg) < t) ++seg;
    const std::size_t i = seg - 1;
    const double w = std::clamp(
        (t - path.time(i)) / (path.time(seg) - path.time(i)), 0.0, 1.0);
    for (std::size_t c = 0; c < d; ++c) {
      const double a = path.value(i, c);
      const double b = path.value(seg, c);
      vals[k * d + c] = w == 1.0 ? b : a + w * (b - a);
    }
  }
  return SampledPath(times, std::move(vals), d);
}

SampledPath difference(const SampledPath& a, const SampledPath& b) {
  if (a.size() != b.size() || a.dim() != b.dim())
    throw ValidationError("paths live on different grids");
  std::vector<double> v(a.flat().size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.flat()[k] - b.flat()[k];
  return SampledPath(a.times(), std::move(v), a.dim());
}

Partition dyadic_partition(const SampledPath& path, int N) {
  if (N < 0 || N > 15) throw ValidationError("dyadic depth out of range");
  const std::size_t L = std::size_t{1} << (2 * N);
  std::vector<std::size_t> idx(L + 1);
  const double T = path.horizon();
  std::size_t from = 0;
  for (std::size_t l = 0; l <= L; ++l) {
    const double t = T * std::ldexp(static_cast<double>(l), -2 * N);
    auto it = std::lower_bound(path.times().begin() + from, path.times().end(),
                               t - kAbsTol);
    if (it == path.times().end() || std::abs(*it - t) > kAbsTol)
      throw ValidationError("dyadic point " + format_real(t) +
                            " missing from grid (N=" + std::to_string(N) + ")");
    idx[l] = static_cast<std::size_t>(it - path.times().begin());
    from = idx[l];
  }
  return Partition(std::move(idx), path.size());
}

std::vector<double> uniform_times(std::size_t n, double T) {
  if (n < 2) throw ValidationError("grid needs at least 2 points");
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = T * static_cast<double>(i) / static_cast<double>(n - 1);
  t.back() = T;
  return t;
}

std::vector<double> dyadic_times(int N) {
  if (N < 0 || N > 15) throw ValidationError("dyadic depth out of range");
  const std::size_t L = std::size_t{1} << (2 * N);
  std::vector<double> t(L + 1);
  for (std::size_t l = 0; l <= L; ++l)
    t[l] = std::ldexp(static_cast<double>(l), -2 * N);
  return t;
}

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SampledPath read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv: empty input");
  std::size_t cols = 1;
  for (char ch : line) cols += ch == ',';
  if (line.rfind("t,", 0) != 0 || cols < 2)
    throw ValidationError("csv: header must be t,x1,...,xd");
  const std::size_t d = cols - 1;
  std::vector<double> times, vals;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw ValidationError("csv line " + std::to_string(lineno) +
                              ": bad number '" + cell + "'");
      if (c == 0) times.push_back(v);
      else vals.push_back(v);
      ++c;
    }
    if (c != cols)
      throw ValidationError("csv line " + std::to_string(lineno) +
                            ": expected " + std::to_string(cols) + " fields");
  }
  return SampledPath(std::move(times), std::move(vals), d);
}

SampledPath read_csv_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file);
  return read_csv(in);
}

void write_csv(std::ostream& out, const SampledPath& path) {
  out << "t";
  for (std::size_t c = 0; c < path.dim(); ++c) out << ",x" << c + 1;
  out << '\n';
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_real(path.time(i));
    for (std::size_t c = 0; c < path.dim(); ++c)
      out << ',' << format_real(path.value(i, c));
    out << '\n';
  }
}

}  // namespace roughlab
