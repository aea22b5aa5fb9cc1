#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughlab/modulus.hpp"
#include "roughlab/path_core.hpp"
#include "roughlab/young.hpp"

namespace roughlab {

enum class Verdict { enhancible_evidence, non_enhancible_evidence, inconclusive };
std::string to_string(Verdict v);

struct ProbeLevel {
  double mesh;
  /// 1-variation estimate of A(gamma^{D_i}) - A(gamma^{D_{i+1}}) on the
  /// finer grid; NaN on the last level.
  double diff;
  /// 1-variation estimate of A(gamma^{D_i}) on its own grid.
  double sup;
  /// |A(gamma^{D_i})(0,T)|, used by the growth rule; not serialized.
  double area_0T;
};

struct ModulusEntry {
  double delta;
  double value;
};

struct ProbeReport {
  Verdict verdict;
  std::vector<ProbeLevel> levels;
  std::vector<ModulusEntry> equicontinuity_modulus;
};

struct ProbeConfig {
  double tol = 5e-2;           // relative to the coarsest nonzero level
  double decay_factor = 0.7;   // per level, averaged over the last three
  double growth_factor = 1.5;  // growth across a 3-level window
  std::vector<double> deltas = {0.25, 0.0625, 0.015625, 0.00390625};
};

/// Dyadic levels N = 2 .. ceil(log4(n-1)) of a grid with n points.
std::vector<Partition> default_schedule(const SampledPath& path);

ProbeReport enhancibility_probe(const SampledPath& path,
                                const std::vector<Partition>& schedule,
                                const ProbeConfig& cfg = {});

ProbeReport weak_geometric_probe(const SampledPath& path,
                                 const std::vector<Partition>& schedule,
                                 const ProbeConfig& cfg = {});

struct SufficientCheck {
  bool predicted;
  double C;
  /// Value of the modulus integral; NaN when divergent.
  double I;
  bool divergent;
};

SufficientCheck sufficient_condition_check(const SampledPath& path,
                                           const ModulusFn& m);

struct EnhancementValue {
  Status status;
  std::vector<Tensor2> levels;
  std::optional<Tensor2> value;
};

/// A(gamma^{D_i})(s,t) across the schedule; s,t are grid times.
EnhancementValue enhancement_value(const SampledPath& path, double s, double t,
                                   const std::vector<Partition>& schedule,
                                   double tol);

}  // namespace roughlab
