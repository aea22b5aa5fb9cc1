#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "roughlab/modulus.hpp"
#include "roughlab/path_core.hpp"

namespace roughlab {

inline constexpr double kInfinityP = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultMaxSamples = 200000;

/// Grid cap for O(n^2) functionals; ROUGHLAB_MAX_SAMPLES overrides.
std::size_t max_samples();

struct VariationReport {
  double value;
  Partition optimal_partition;
  double p;
};

/// r^p given r^2, with shortcuts for the common exponents.
struct PowerOfNorm {
  double p;
  double operator()(double sq) const {
    if (p == 2.0) return sq;
    if (p == 1.0) return std::sqrt(sq);
    if (p == 3.0) return sq * std::sqrt(sq);
    if (p == 4.0) return sq * sq;
    return std::pow(sq, 0.5 * p);
  }
};

VariationReport p_variation(const SampledPath& path, double p);

/// Plain O(n^2) recursion without pruning; reference for p_variation.
VariationReport p_variation_plain(const SampledPath& path, double p);

struct MeshModulusReport {
  double value;
  bool feasible;
  std::vector<std::size_t> partition;
};

MeshModulusReport mesh_modulus(const SampledPath& path, double p,
                               double delta);

double holder_constant(const SampledPath& path, double p, const ModulusFn& m);

double wiener_gap(const SampledPath& path, const Partition& D, double p);

/// max over subsequences g[0] = a_0 < ... < a_k = g[m-1] of
/// sum r(a_i, a_{i+1})^p, returned as the p-th root. row(j, out) writes
/// r(i, j) to out[i] for every i < j; positions index the grid list, not
/// raw path indices.
template <class Row>
double grid_pvar_dp_rows(std::size_t m, double p, Row&& row,
                         std::vector<std::size_t>* chosen = nullptr) {
  if (m < 2) throw ValidationError("two-parameter variation needs 2 points");
  std::vector<double> M(m, 0.0), buf(m, 0.0);
  std::vector<std::size_t> prev(m, 0);
  const bool unit = p == 1.0;
  for (std::size_t j = 1; j < m; ++j) {
    double* c = buf.data();
    row(j, c);
    if (!unit)
      for (std::size_t i = 0; i < j; ++i) c[i] = std::pow(c[i], p);
    for (std::size_t i = 0; i < j; ++i) c[i] += M[i];
    // four chains so the comparisons overlap
    double b4[4] = {c[0], c[0], c[0], c[0]};
    std::size_t i = 0;
    for (; i + 4 <= j; i += 4)
      for (int k = 0; k < 4; ++k) b4[k] = c[i + k] > b4[k] ? c[i + k] : b4[k];
    for (; i < j; ++i) b4[0] = c[i] > b4[0] ? c[i] : b4[0];
    const double best = std::max(std::max(b4[0], b4[1]), std::max(b4[2], b4[3]));
    // ties go to the latest split point
    std::size_t arg = j - 1;
    while (c[arg] != best) --arg;
    M[j] = best;
    prev[j] = arg;
  }
  if (chosen) {
    chosen->clear();
    for (std::size_t k = m - 1;; k = prev[k]) {
      chosen->push_back(k);
      if (k == 0) break;
    }
    std::reverse(chosen->begin(), chosen->end());
  }
  return unit ? M[m - 1] : std::pow(M[m - 1], 1.0 / p);
}

/// grid_pvar_dp_rows with r given pairwise.
template <class NormAt>
double grid_pvar_dp(std::size_t m, double p, NormAt&& norm_at,
                    std::vector<std::size_t>* chosen = nullptr) {
  return grid_pvar_dp_rows(
      m, p,
      [&](std::size_t j, double* out) {
        for (std::size_t i = 0; i < j; ++i) out[i] = norm_at(i, j);
      },
      chosen);
}

/// Grid-restricted 1-variation of a two-parameter function over the
/// indices of `grid`.
double two_param_one_var(const TwoParamFn& alpha, const Partition& grid);

/// Same estimator with exponent p >= 1.
double two_param_p_var(const TwoParamFn& alpha, const Partition& grid,
                       double p);

}  // namespace roughlab
