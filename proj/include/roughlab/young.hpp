#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roughlab/modulus.hpp"
#include "roughlab/path_core.hpp"

namespace roughlab {

struct QuadResult {
  double value;
  double abs_error;
};

/// Integral over (0,1] of m1(t) m2(t) / t. Throws DivergentError when the
/// product decays too slowly at 0.
QuadResult modulus_integral(const ModulusFn& m1, const ModulusFn& m2,
                            double tol = 1e-12);

enum class Status { converged, diverging, oscillating, inconclusive };
std::string to_string(Status s);

struct ConvergenceLevel {
  double mesh;
  Tensor2 value;
  /// Two-parameter 1-variation of the change from the previous level;
  /// NaN on the first level.
  double diff;
};

struct ConvergenceReport {
  Status status;
  double tol;
  std::vector<ConvergenceLevel> levels;
  std::optional<Tensor2> final_value;
  /// t -> integral of gamma1 (x) d gamma2 over [0,t] on the final grid,
  /// flattened row-major into R^{d1 d2}.
  std::optional<SampledPath> integral_path;
};

inline constexpr double kDivergenceFactor = 1e3;
inline constexpr int kDivergenceRun = 10;
inline constexpr int kOscillationCount = 3;
inline constexpr double kOscillationRatio = 0.5;

/// Status rule shared by refinement diagnostics. values[i] is the level-i
/// value, diffs[i] its distance to level i-1 (diffs[0] ignored).
Status classify_levels(const std::vector<Tensor2>& values,
                       const std::vector<double>& diffs, double tol);

/// Schedules must be nested and end at the full grid.
void check_schedule(const std::vector<Partition>& schedule,
                    std::size_t grid_size);

ConvergenceReport rs_integrate(const SampledPath& path1,
                               const SampledPath& path2,
                               const std::vector<Partition>& schedule,
                               double tol);

double young_constant(double p, double q);

/// (8 C1 C2 (2 + I), C1 C2 (15 + 8 I)).
std::pair<double, double> young_bound_extended(double C1, double C2,
                                               double I_m);

double constants_Cap(double a, double p);

/// (C_{a,p,M}, tilde C_{a,p,M}).
std::pair<double, double> constants_CapM(double a, double p, double M);

}  // namespace roughlab
