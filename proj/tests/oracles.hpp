#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library's numerical routines.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "roughlab/path_core.hpp"

namespace oracle {

using roughlab::SampledPath;

inline double dist(const SampledPath& p, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t c = 0; c < p.dim(); ++c) {
    const double x = p.value(j, c) - p.value(i, c);
    s += x * x;
  }
  return std::sqrt(s);
}

/// Max over all endpoint-containing subsequences of sum |increment|^p.
inline double brute_pvar(const SampledPath& p, double pw) {
  const std::size_t n = p.size();
  const std::size_t inner = n - 2;
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inner); ++mask) {
    double s = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < inner; ++k) {
      if (mask >> k & 1) {
        s += std::pow(dist(p, last, k + 1), pw);
        last = k + 1;
      }
    }
    s += std::pow(dist(p, last, n - 1), pw);
    best = std::max(best, s);
  }
  return std::pow(best, 1.0 / pw);
}

/// Same enumeration for a two-parameter norm table f(i,j).
template <class F>
double brute_two_param(std::size_t n, F&& f) {
  const std::size_t inner = n - 2;
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inner); ++mask) {
    double s = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < inner; ++k)
      if (mask >> k & 1) {
        s += f(last, k + 1);
        last = k + 1;
      }
    s += f(last, n - 1);
    best = std::max(best, s);
  }
  return best;
}

/// Signed area enclosed by the polyline from s to t closed by its chord.
inline double shoelace(const SampledPath& p, std::size_t s, std::size_t t,
                       std::size_t a = 0, std::size_t b = 1) {
  double acc = 0.0;
  for (std::size_t k = s; k <= t; ++k) {
    const std::size_t m = k == t ? s : k + 1;
    acc += p.value(k, a) * p.value(m, b) - p.value(m, a) * p.value(k, b);
  }
  return 0.5 * acc;
}

/// Planar bracket sum over consecutive grid points, term by term.
inline double direct_bracket(const std::vector<double>& x,
                             const std::vector<double>& y) {
  long double s = 0.0L;
  for (std::size_t l = 0; l + 1 < x.size(); ++l)
    s += static_cast<long double>(x[l]) * y[l + 1] -
         static_cast<long double>(y[l]) * x[l + 1];
  return static_cast<double>(s);
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng);
  }
};

/// Random-walk path on a random strictly increasing grid over [0, T].
inline SampledPath random_path(Rng& rng, std::size_t n, std::size_t d,
                               double T = 1.0) {
  std::vector<double> t(n);
  t[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) t[i] = t[i - 1] + rng.uniform(0.1, 1.0);
  const double scale = T / t.back();
  for (double& x : t) x *= scale;
  t.back() = T;
  std::vector<double> v(n * d);
  for (std::size_t c = 0; c < d; ++c) v[c] = rng.normal();
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c)
      v[i * d + c] = v[(i - 1) * d + c] + rng.normal();
  return SampledPath(std::move(t), std::move(v), d);
}

/// Random strictly increasing subset containing both endpoints.
inline std::vector<std::size_t> random_subgrid(Rng& rng, std::size_t n,
                                               double keep = 0.5) {
  std::vector<std::size_t> idx{0};
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (rng.uniform() < keep) idx.push_back(i);
  idx.push_back(n - 1);
  return idx;
}

/// Low-frequency random trigonometric path sampled on `times`.
inline SampledPath random_smooth(Rng& rng, const std::vector<double>& times,
                                 std::size_t d, int terms = 3) {
  std::vector<double> a(d * terms), ph(d * terms);
  for (auto& x : a) x = rng.normal();
  for (auto& x : ph) x = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<double> v(times.size() * d);
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t c = 0; c < d; ++c) {
      double s = 0.0;
      for (int k = 0; k < terms; ++k)
        s += a[c * terms + k] / (k + 1) *
             std::sin(2.0 * std::numbers::pi * (k + 1) * times[i] +
                      ph[c * terms + k]);
      v[i * d + c] = s;
    }
  return SampledPath(times, std::move(v), d);
}

}  // namespace oracle
