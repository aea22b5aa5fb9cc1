#include "roughlab/area.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace roughlab {

namespace {

void check_pair(const SampledPath& path, std::size_t s, std::size_t t) {
  if (s > t || t >= path.size())
    throw ValidationError("grid indices must satisfy s <= t < n");
}

void check_same_grid(const SampledPath& a, const SampledPath& b) {
  if (a.size() != b.size())
    throw ValidationError("paths live on different grids");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a.time(i) - b.time(i)) > kAbsTol)
      throw ValidationError("paths live on different grids");
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Tensor2 area_pl(const SampledPath& path, std::size_t s, std::size_t t) {
  check_pair(path, s, t);
  const std::size_t d = path.dim();
  Tensor2 A(d, d);
  const auto base = path.point(s);
  // Brackets taken relative to gamma(s); the closed form is invariant
  // under translation and the centred sum loses less precision.
  std::vector<double> u(d), v(d);
  for (std::size_t k = s; k < t; ++k) {
    for (std::size_t c = 0; c < d; ++c) {
      u[c] = path.value(k, c) - base[c];
      v[c] = path.value(k + 1, c) - base[c];
    }
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) A(a, b) += u[a] * v[b] - v[a] * u[b];
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      A(a, b) *= 0.5;
      A(b, a) = -A(a, b);
    }
  }
  return A;
}

Tensor2 area_pl_at(const SampledPath& path, double s, double t) {
  return area_pl(path, path.index_of(s), path.index_of(t));
}

Tensor2 iterated_integral_pl(const SampledPath& path1,
                             const SampledPath& path2, std::size_t s,
                             std::size_t t) {
  check_same_grid(path1, path2);
  check_pair(path1, s, t);
  const std::size_t d1 = path1.dim(), d2 = path2.dim();
  Tensor2 I(d1, d2);
  std::vector<double> r(d1), dy(d2);
  for (std::size_t k = s; k < t; ++k) {
    for (std::size_t a = 0; a < d1; ++a) {
      const double lo = path1.value(k, a) - path1.value(s, a);
      const double hi = path1.value(k + 1, a) - path1.value(s, a);
      r[a] = 0.5 * (lo + hi);
    }
    for (std::size_t b = 0; b < d2; ++b)
      dy[b] = path2.value(k + 1, b) - path2.value(k, b);
    for (std::size_t a = 0; a < d1; ++a)
      for (std::size_t b = 0; b < d2; ++b) I(a, b) += r[a] * dy[b];
  }
  return I;
}

Tensor2 riemann_bracket_sum(const SampledPath& path, const Partition& D) {
  if (D.grid_size() != path.size())
    throw ValidationError("partition is not a sub-grid of this path");
  const std::size_t d = path.dim();
  Tensor2 S(d, d);
  for (std::size_t k = 0; k + 1 < D.size(); ++k)
    S += lie_bracket(path.point(D[k]), path.point(D[k + 1]));
  return S;
}

Tensor2 riemann_sum(const SampledPath& path1, const SampledPath& path2,
                    const Partition& D, RiemannRule rule) {
  check_same_grid(path1, path2);
  if (D.grid_size() != path1.size())
    throw ValidationError("partition is not a sub-grid of this path");
  const std::size_t d1 = path1.dim(), d2 = path2.dim();
  Tensor2 S(d1, d2);
  std::vector<double> r(d1), dy(d2);
  for (std::size_t k = 0; k + 1 < D.size(); ++k) {
    const std::size_t i = D[k], j = D[k + 1];
    for (std::size_t a = 0; a < d1; ++a)
      r[a] = rule == RiemannRule::left
                 ? path1.value(i, a)
                 : 0.5 * (path1.value(i, a) + path1.value(j, a));
    for (std::size_t b = 0; b < d2; ++b)
      dy[b] = path2.value(j, b) - path2.value(i, b);
    for (std::size_t a = 0; a < d1; ++a)
      for (std::size_t b = 0; b < d2; ++b) S(a, b) += r[a] * dy[b];
  }
  return S;
}

double chen_defect(const TwoParamFn& alpha, const SampledPath& path,
                   std::size_t s, std::size_t u, std::size_t t) {
  if (s > u || u > t || t >= path.size())
    throw ValidationError("chen defect needs s <= u <= t on the grid");
  const Point a = increment(path, s, u);
  const Point b = increment(path, u, t);
  Tensor2 r = alpha(s, t) - alpha(s, u) - alpha(u, t);
  r -= 0.5 * lie_bracket(a, b);
  return r.frobenius();
}

AreaTable::AreaTable(const SampledPath& path)
    : n_(path.size()), d_(path.dim()), m_(d_ * (d_ - 1) / 2),
      y_(path.flat().size()), prefix_(n_ * m_, 0.0) {
  for (std::size_t a = 0; a < d_; ++a)
    for (std::size_t b = a + 1; b < d_; ++b) {
      pa_.push_back(a);
      pb_.push_back(b);
    }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t c = 0; c < d_; ++c)
      y_[i * d_ + c] = path.value(i, c) - path.value(0, c);
  for (std::size_t k = 1; k < n_; ++k) {
    const double* u = &y_[(k - 1) * d_];
    const double* v = &y_[k * d_];
    for (std::size_t q = 0; q < m_; ++q)
      prefix_[k * m_ + q] = prefix_[(k - 1) * m_ + q] + u[pa_[q]] * v[pb_[q]] -
                            v[pa_[q]] * u[pb_[q]];
  }
}

Tensor2 AreaTable::operator()(std::size_t i, std::size_t j) const {
  Tensor2 A(d_, d_);
  for (std::size_t q = 0; q < m_; ++q) {
    const double x = entry(i, j, q);
    A(pa_[q], pb_[q]) = x;
    A(pb_[q], pa_[q]) = -x;
  }
  return A;
}

// Planar paths have a single area entry; that case gets contiguous loops.
void AreaTable::norm_row(std::size_t j, double* out) const {
  if (m_ == 1) {
    const double pj = prefix_[j], vx = y_[j * 2], vy = y_[j * 2 + 1];
    const double* P = prefix_.data();
    const double* Y = y_.data();
    for (std::size_t i = 0; i < j; ++i) {
      const double x = 0.5 * (pj - P[i]) - 0.5 * (Y[2 * i] * vy - vx * Y[2 * i + 1]);
      out[i] = std::numbers::sqrt2 * std::abs(x);
    }
    return;
  }
  for (std::size_t i = 0; i < j; ++i) out[i] = norm(i, j);
}

void AreaTable::diff_norm_row(const AreaTable& other, std::size_t j,
                              double* out) const {
  if (m_ == 1) {
    const double pj = prefix_[j], vx = y_[j * 2], vy = y_[j * 2 + 1];
    const double qj = other.prefix_[j], wx = other.y_[j * 2], wy = other.y_[j * 2 + 1];
    const double *P = prefix_.data(), *Y = y_.data();
    const double *Q = other.prefix_.data(), *Z = other.y_.data();
    for (std::size_t i = 0; i < j; ++i) {
      const double x = 0.5 * (pj - P[i]) - 0.5 * (Y[2 * i] * vy - vx * Y[2 * i + 1]);
      const double z = 0.5 * (qj - Q[i]) - 0.5 * (Z[2 * i] * wy - wx * Z[2 * i + 1]);
      out[i] = std::numbers::sqrt2 * std::abs(x - z);
    }
    return;
  }
  for (std::size_t i = 0; i < j; ++i) out[i] = diff_norm(other, i, j);
}

IteratedTable::IteratedTable(const SampledPath& path1,
                             const SampledPath& path2)
    : n_(path1.size()), d1_(path1.dim()), d2_(path2.dim()),
      y1_(path1.flat().size()), y2_(path2.flat().size()),
      prefix_(n_ * d1_ * d2_, 0.0) {
  check_same_grid(path1, path2);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t c = 0; c < d1_; ++c)
      y1_[i * d1_ + c] = path1.value(i, c) - path1.value(0, c);
    for (std::size_t c = 0; c < d2_; ++c)
      y2_[i * d2_ + c] = path2.value(i, c) - path2.value(0, c);
  }
  const std::size_t m = d1_ * d2_;
  for (std::size_t k = 1; k < n_; ++k) {
    for (std::size_t a = 0; a < d1_; ++a) {
      const double r = 0.5 * (y1_[(k - 1) * d1_ + a] + y1_[k * d1_ + a]);
      for (std::size_t b = 0; b < d2_; ++b) {
        const double dy = y2_[k * d2_ + b] - y2_[(k - 1) * d2_ + b];
        prefix_[k * m + a * d2_ + b] = prefix_[(k - 1) * m + a * d2_ + b] + r * dy;
      }
    }
  }
}

double IteratedTable::entry(std::size_t i, std::size_t j, std::size_t a,
                            std::size_t b) const {
  const std::size_t m = d1_ * d2_;
  return prefix_[j * m + a * d2_ + b] - prefix_[i * m + a * d2_ + b] -
         y1_[i * d1_ + a] * (y2_[j * d2_ + b] - y2_[i * d2_ + b]);
}

Tensor2 IteratedTable::operator()(std::size_t i, std::size_t j) const {
  Tensor2 I(d1_, d2_);
  for (std::size_t a = 0; a < d1_; ++a)
    for (std::size_t b = 0; b < d2_; ++b) I(a, b) = entry(i, j, a, b);
  return I;
}

double IteratedTable::diff_norm(const IteratedTable& other, std::size_t i,
                                std::size_t j) const {
  double s = 0.0;
  for (std::size_t a = 0; a < d1_; ++a)
    for (std::size_t b = 0; b < d2_; ++b) {
      const double x = entry(i, j, a, b) - other.entry(i, j, a, b);
      s += x * x;
    }
  return std::sqrt(s);
}

void IteratedTable::diff_norm_row(const IteratedTable& other, std::size_t j,
                                  double* out) const {
  const std::size_t m = d1_ * d2_;
  std::fill(out, out + j, 0.0);
  for (std::size_t a = 0; a < d1_; ++a)
    for (std::size_t b = 0; b < d2_; ++b) {
      const std::size_t q = a * d2_ + b;
      const double pj = prefix_[j * m + q], qj = other.prefix_[j * m + q];
      const double vj = y2_[j * d2_ + b], wj = other.y2_[j * d2_ + b];
      for (std::size_t i = 0; i < j; ++i) {
        const double x = pj - prefix_[i * m + q] -
                         y1_[i * d1_ + a] * (vj - y2_[i * d2_ + b]);
        const double z = qj - other.prefix_[i * m + q] -
                         other.y1_[i * d1_ + a] * (wj - other.y2_[i * d2_ + b]);
        out[i] += (x - z) * (x - z);
      }
    }
  for (std::size_t i = 0; i < j; ++i) out[i] = std::sqrt(out[i]);
}

TrigPath::TrigPath(std::vector<TrigTerm> terms, std::size_t re_axis,
                   std::size_t im_axis, std::size_t dim)
    : terms_(std::move(terms)), re_(re_axis), im_(im_axis), dim_(dim) {
  if (terms_.empty()) throw ValidationError("trig path needs a term");
  if (re_ == im_ || re_ >= dim_ || im_ >= dim_ || dim_ < 2)
    throw ValidationError("trig path axes must be distinct and < dim");
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    if (!std::isfinite(terms_[j].coefficient) ||
        !std::isfinite(terms_[j].frequency) || !std::isfinite(terms_[j].phase))
      throw ValidationError("trig path term is not finite");
    for (std::size_t k = 0; k < j; ++k)
      if (terms_[j].frequency == terms_[k].frequency)
        throw ValidationError("trig path frequencies must be distinct");
  }
}

double TrigPath::phase_at(std::size_t k, double t) const {
  // Reduce w*t modulo 1 before scaling so large lacunary frequencies keep
  // their phase.
  const double wt = terms_[k].frequency * t;
  return kTwoPi * (wt - std::floor(wt)) + terms_[k].phase;
}

Point TrigPath::eval(double t) const {
  Point out(dim_, 0.0);
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const double th = phase_at(k, t);
    out[re_] += terms_[k].coefficient * std::cos(th);
    out[im_] += terms_[k].coefficient * std::sin(th);
  }
  return out;
}

double TrigPath::area_entry(double s, double t) const {
  if (s > t) throw ValidationError("trig area needs s <= t");
  if (s == t) return 0.0;
  const std::size_t K = terms_.size();
  std::vector<double> ts(K), tt(K);
  for (std::size_t k = 0; k < K; ++k) {
    ts[k] = phase_at(k, s);
    tt[k] = phase_at(k, t);
  }
  double twice = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double a = terms_[k].coefficient, w = terms_[k].frequency;
    twice += kTwoPi * a * a * w * (t - s);
  }
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t k = j + 1; k < K; ++k) {
      const double wj = terms_[j].frequency, wk = terms_[k].frequency;
      const double f = terms_[j].coefficient * terms_[k].coefficient *
                       (wk + wj) / (wk - wj);
      twice += f * (std::sin(tt[k] - tt[j]) - std::sin(ts[k] - ts[j]));
    }
  }
  for (std::size_t j = 0; j < K; ++j)
    for (std::size_t k = 0; k < K; ++k)
      twice -= terms_[j].coefficient * terms_[k].coefficient *
               std::sin(tt[k] - ts[j]);
  return 0.5 * twice;
}

SampledPath TrigPath::sample(const std::vector<double>& times) const {
  std::vector<double> v;
  v.reserve(times.size() * dim_);
  for (double t : times) {
    const Point p = eval(t);
    v.insert(v.end(), p.begin(), p.end());
  }
  return SampledPath(times, std::move(v), dim_);
}

Tensor2 trig_area(const TrigPath& spec, double s, double t) {
  Tensor2 A(spec.dim(), spec.dim());
  const double x = spec.area_entry(s, t);
  A(spec.re_axis(), spec.im_axis()) = x;
  A(spec.im_axis(), spec.re_axis()) = -x;
  return A;
}

}  // namespace roughlab
