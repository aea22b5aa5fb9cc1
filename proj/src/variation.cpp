#include "roughlab/variation.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace roughlab {

namespace {

void check_p(double p) {
  if (!(p >= 1.0))
    throw ValidationError("p-variation needs p >= 1, got " + format_real(p));
}

void check_size(const SampledPath& path) {
  const std::size_t cap = max_samples();
  if (path.size() > cap)
    throw SizeLimitError("path has " + std::to_string(path.size()) +
                         " samples, cap is " + std::to_string(cap));
}

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double x = a[c] - b[c];
    s += x * x;
  }
  return s;
}

std::vector<std::size_t> backtrack(const std::vector<std::size_t>& prev,
                                   std::size_t last) {
  std::vector<std::size_t> out;
  for (std::size_t k = last;; k = prev[k]) {
    out.push_back(k);
    if (k == 0) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

VariationReport sup_increment(const SampledPath& path) {
  const std::size_t n = path.size();
  const std::size_t d = path.dim();
  const double* x = path.flat().data();
  double best = 0.0;
  std::size_t bi = 0, bj = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = sq_dist(x + i * d, x + j * d, d);
      if (s > best) {
        best = s;
        bi = i;
        bj = j;
      }
    }
  }
  std::vector<std::size_t> idx{0};
  if (bi != 0) idx.push_back(bi);
  if (bj != bi && bj != 0) idx.push_back(bj);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  return {std::sqrt(best), Partition(std::move(idx), n), kInfinityP};
}

// Bounding boxes of consecutive blocks of grid points, used to discard
// whole blocks whose best possible contribution cannot beat the running
// maximum. M is non-decreasing along the grid, so M at a block's last
// index bounds M on the whole block.
struct BlockBoxes {
  std::size_t B, nb, d;
  std::vector<double> lo, hi, plo, phi;

  BlockBoxes(const double* x, std::size_t n, std::size_t d_, std::size_t B_)
      : B(B_), nb((n + B_ - 1) / B_), d(d_), lo(nb * d_), hi(nb * d_),
        plo(nb * d_), phi(nb * d_) {
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t s = b * B, e = std::min(n, s + B);
      for (std::size_t c = 0; c < d; ++c) {
        double l = x[s * d + c], h = l;
        for (std::size_t i = s + 1; i < e; ++i) {
          l = std::min(l, x[i * d + c]);
          h = std::max(h, x[i * d + c]);
        }
        lo[b * d + c] = l;
        hi[b * d + c] = h;
        plo[b * d + c] = b ? std::min(l, plo[(b - 1) * d + c]) : l;
        phi[b * d + c] = b ? std::max(h, phi[(b - 1) * d + c]) : h;
      }
    }
  }

  static double far_sq(const double* p, const double* l, const double* h,
                       std::size_t d) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double u = std::max(std::abs(p[c] - l[c]), std::abs(p[c] - h[c]));
      s += u * u;
    }
    return s;
  }
};

}  // namespace

std::size_t max_samples() {
  if (const char* env = std::getenv("ROUGHLAB_MAX_SAMPLES")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v >= 2) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxSamples;
}

VariationReport p_variation_plain(const SampledPath& path, double p) {
  if (p == kInfinityP) return sup_increment(path);
  check_p(p);
  check_size(path);
  const std::size_t n = path.size();
  const std::size_t d = path.dim();
  const double* x = path.flat().data();
  const PowerOfNorm pw{p};
  std::vector<double> M(n, 0.0);
  std::vector<std::size_t> prev(n, 0);
  for (std::size_t j = 1; j < n; ++j) {
    double best = -1.0;
    for (std::size_t i = j; i-- > 0;) {
      const double cand = M[i] + pw(sq_dist(x + i * d, x + j * d, d));
      if (cand > best) {
        best = cand;
        prev[j] = i;
      }
    }
    M[j] = best;
  }
  return {std::pow(M[n - 1], 1.0 / p), Partition(backtrack(prev, n - 1), n), p};
}

VariationReport p_variation(const SampledPath& path, double p) {
  if (p == kInfinityP) return sup_increment(path);
  check_p(p);
  check_size(path);
  const std::size_t n = path.size();
  const std::size_t d = path.dim();
  const double* x = path.flat().data();
  const PowerOfNorm pw{p};
  const BlockBoxes box(x, n, d, 32);
  std::vector<double> M(n, 0.0);
  std::vector<std::size_t> prev(n, 0);

  for (std::size_t j = 1; j < n; ++j) {
    const double* xj = x + j * d;
    double best = -1.0;
    std::size_t arg = j - 1;
    const std::size_t jb = j / box.B;
    for (std::size_t i = j; i-- > jb * box.B;) {
      const double cand = M[i] + pw(sq_dist(x + i * d, xj, d));
      if (cand > best) {
        best = cand;
        arg = i;
      }
    }
    for (std::size_t b = jb; b-- > 0;) {
      const std::size_t last = (b + 1) * box.B - 1;
      const double* pl = &box.plo[b * d];
      const double* ph = &box.phi[b * d];
      if (M[last] + pw(BlockBoxes::far_sq(xj, pl, ph, d)) <= best) break;
      const double* l = &box.lo[b * d];
      const double* h = &box.hi[b * d];
      if (M[last] + pw(BlockBoxes::far_sq(xj, l, h, d)) <= best) continue;
      for (std::size_t i = last + 1; i-- > b * box.B;) {
        const double cand = M[i] + pw(sq_dist(x + i * d, xj, d));
        if (cand > best) {
          best = cand;
          arg = i;
        }
      }
    }
    M[j] = best;
    prev[j] = arg;
  }
  return {std::pow(M[n - 1], 1.0 / p), Partition(backtrack(prev, n - 1), n), p};
}

MeshModulusReport mesh_modulus(const SampledPath& path, double p,
                               double delta) {
  check_p(p);
  check_size(path);
  if (!(delta > 0.0)) throw ValidationError("mesh modulus needs delta > 0");
  const std::size_t n = path.size();
  const std::size_t d = path.dim();
  const double* x = path.flat().data();
  const PowerOfNorm pw{p};
  std::vector<double> M(n, -1.0);
  std::vector<std::size_t> prev(n, 0);
  M[0] = 0.0;
  std::size_t lo = 0;
  for (std::size_t j = 1; j < n; ++j) {
    while (path.time(j) - path.time(lo) > delta + kAbsTol) ++lo;
    double best = -1.0;
    for (std::size_t i = lo; i < j; ++i) {
      if (M[i] < 0.0) continue;
      const double cand = M[i] + pw(sq_dist(x + i * d, x + j * d, d));
      if (cand > best) {
        best = cand;
        prev[j] = i;
      }
    }
    M[j] = best;
  }
  if (M[n - 1] < 0.0) return {0.0, false, {}};
  return {std::pow(M[n - 1], 1.0 / p), true, backtrack(prev, n - 1)};
}

double holder_constant(const SampledPath& path, double p, const ModulusFn& m) {
  if (!(p > 1.0)) throw ValidationError("holder constant needs p > 1");
  if (std::abs(path.horizon() - 1.0) > kAbsTol)
    throw ValidationError("holder constant needs a path on [0,1]");
  check_size(path);
  const std::size_t n = path.size();
  const std::size_t d = path.dim();
  const double* x = path.flat().data();
  std::vector<double> lo(d), hi(d);
  for (std::size_t c = 0; c < d; ++c) {
    lo[c] = hi[c] = x[c];
    for (std::size_t i = 1; i < n; ++i) {
      lo[c] = std::min(lo[c], x[i * d + c]);
      hi[c] = std::max(hi[c], x[i * d + c]);
    }
  }
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double reach =
        std::sqrt(BlockBoxes::far_sq(x + i * d, lo.data(), hi.data(), d));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double h = path.time(j) - path.time(i);
      const double mh = m(h);
      if (!(mh > 0.0))
        throw ValidationError("modulus vanishes at positive gap " +
                              format_real(h));
      const double den = std::pow(h, 1.0 / p) * mh;
      if (reach <= best * den) break;
      const double r = std::sqrt(sq_dist(x + i * d, x + j * d, d)) / den;
      best = std::max(best, r);
    }
  }
  return best;
}

double wiener_gap(const SampledPath& path, const Partition& D, double p) {
  const SampledPath coarse = interpolate_onto(restrict(path, D), path.times());
  return p_variation(difference(path, coarse), p).value;
}

double two_param_one_var(const TwoParamFn& alpha, const Partition& grid) {
  return two_param_p_var(alpha, grid, 1.0);
}

double two_param_p_var(const TwoParamFn& alpha, const Partition& grid,
                       double p) {
  check_p(p);
  const auto& g = grid.indices();
  return grid_pvar_dp(g.size(), p, [&](std::size_t a, std::size_t b) {
    return alpha(g[a], g[b]).frobenius();
  });
}

}  // namespace roughlab
