#include "roughlab/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roughlab/area.hpp"
#include "roughlab/variation.hpp"

namespace roughlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Relative differences at this size are rounding residue.
constexpr double kRelNoise = 1e-12;

// Largest |A(s,t)| over grid pairs with t - s <= delta, for each delta.
// `out` is sorted by decreasing delta; one running max per start point.
void update_modulus(const AreaTable& table, const std::vector<double>& times,
                    std::vector<ModulusEntry>& out) {
  const std::size_t n = times.size();
  for (std::size_t i = 0; i < n; ++i) {
    double run = 0.0;
    std::size_t j = i + 1;
    for (std::size_t k = out.size(); k-- > 0;) {
      for (; j < n && times[j] - times[i] <= out[k].delta + kAbsTol; ++j)
        run = std::max(run, table.norm(i, j));
      out[k].value = std::max(out[k].value, run);
    }
  }
}

double one_var(const AreaTable& t) {
  return grid_pvar_dp_rows(t.size(), 1.0, [&](std::size_t j, double* out) {
    t.norm_row(j, out);
  });
}

// Geometric decay over the trailing three values: the last is at most
// decay_factor^2 times the one two levels back. Values at rounding level
// count as decayed.
bool geometric_tail(const std::vector<double>& r, const ProbeConfig& cfg) {
  if (r.size() < 2) return false;
  const std::size_t lag = r.size() < 3 ? 1 : 2;
  const double a = r[r.size() - 1 - lag], b = r.back();
  if (b <= kRelNoise) return true;
  return b <= std::pow(cfg.decay_factor, static_cast<double>(lag)) * a;
}

// ... and ending below tol.
bool trailing_decay(const std::vector<double>& r, const ProbeConfig& cfg) {
  return geometric_tail(r, cfg) && r.back() <= cfg.tol;
}

// Strict growth across some window of three consecutive positive values
// by at least the growth factor.
bool window_growth(const std::vector<double>& v, const ProbeConfig& cfg) {
  for (std::size_t i = 0; i + 2 < v.size(); ++i) {
    if (!(v[i] > 0.0)) continue;
    if (v[i + 1] > v[i] && v[i + 2] > v[i + 1] &&
        v[i + 2] >= cfg.growth_factor * v[i])
      return true;
  }
  return false;
}

ProbeReport run_levels(const SampledPath& path,
                       const std::vector<Partition>& schedule,
                       const ProbeConfig& cfg) {
  if (schedule.size() < 3)
    throw ValidationError("probe needs at least 3 schedule levels");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i].grid_size() != path.size())
      throw ValidationError("schedule level " + std::to_string(i) +
                            " belongs to another grid");
    if (i > 0 && !schedule[i - 1].is_subset_of(schedule[i]))
      throw ValidationError("schedule not nested at level " +
                            std::to_string(i));
  }
  if (schedule.back().size() > max_samples())
    throw SizeLimitError("finest level exceeds the sample cap");
  if (!(cfg.tol > 0.0)) throw ValidationError("probe tol must be > 0");

  ProbeReport rep{Verdict::inconclusive, {}, {}};
  std::vector<double> deltas = cfg.deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  for (double d : deltas) {
    if (!(d > 0.0)) throw ValidationError("modulus deltas must be > 0");
    rep.equicontinuity_modulus.push_back({d * path.horizon(), 0.0});
  }

  SampledPath cur = restrict(path, schedule[0]);
  AreaTable cur_table(cur);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    ProbeLevel lv{schedule[i].mesh(path), kNaN, one_var(cur_table),
                  cur_table.norm(0, cur.size() - 1)};
    update_modulus(cur_table, cur.times(), rep.equicontinuity_modulus);
    if (i + 1 < schedule.size()) {
      SampledPath next = restrict(path, schedule[i + 1]);
      AreaTable next_table(next);
      const AreaTable coarse(interpolate_onto(cur, next.times()));
      lv.diff = grid_pvar_dp_rows(next.size(), 1.0,
                                  [&](std::size_t j, double* out) {
                                    next_table.diff_norm_row(coarse, j, out);
                                  });
      cur = std::move(next);
      cur_table = std::move(next_table);
    }
    rep.levels.push_back(lv);
  }
  return rep;
}

double coarsest_nonzero(const std::vector<ProbeLevel>& levels) {
  for (const auto& l : levels)
    if (l.sup > 0.0) return l.sup;
  return 0.0;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::enhancible_evidence: return "enhancible-evidence";
    case Verdict::non_enhancible_evidence: return "non-enhancible-evidence";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "";
}

std::vector<Partition> default_schedule(const SampledPath& path) {
  const double intervals = static_cast<double>(path.size() - 1);
  const int top = static_cast<int>(std::ceil(std::log(intervals) / std::log(4.0) - 1e-12));
  std::vector<Partition> out;
  for (int N = 2; N <= top; ++N) out.push_back(dyadic_partition(path, N));
  return out;
}

ProbeReport enhancibility_probe(const SampledPath& path,
                                const std::vector<Partition>& schedule,
                                const ProbeConfig& cfg) {
  ProbeReport rep = run_levels(path, schedule, cfg);
  const double scale = coarsest_nonzero(rep.levels);
  std::vector<double> rel, area;
  for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i)
    rel.push_back(scale > 0.0 ? rep.levels[i].diff / scale : 0.0);
  for (const auto& l : rep.levels) area.push_back(l.area_0T);

  if (scale == 0.0 && std::all_of(rel.begin(), rel.end(),
                                  [](double r) { return r == 0.0; }))
    rep.verdict = Verdict::enhancible_evidence;
  else if (trailing_decay(rel, cfg))
    rep.verdict = Verdict::enhancible_evidence;
  else if ((window_growth(area, cfg) || window_growth(rel, cfg)) &&
           !geometric_tail(rel, cfg))
    rep.verdict = Verdict::non_enhancible_evidence;
  return rep;
}

ProbeReport weak_geometric_probe(const SampledPath& path,
                                 const std::vector<Partition>& schedule,
                                 const ProbeConfig& cfg) {
  ProbeReport rep = run_levels(path, schedule, cfg);
  const double scale = coarsest_nonzero(rep.levels);
  std::vector<double> sup, steps;
  for (const auto& l : rep.levels) sup.push_back(l.sup);
  for (std::size_t i = 1; i < sup.size(); ++i)
    steps.push_back(scale > 0.0 ? std::abs(sup[i] - sup[i - 1]) / scale : 0.0);

  if (scale == 0.0 || trailing_decay(steps, cfg))
    rep.verdict = Verdict::enhancible_evidence;
  else if (window_growth(sup, cfg) && !geometric_tail(steps, cfg))
    rep.verdict = Verdict::non_enhancible_evidence;
  return rep;
}

SufficientCheck sufficient_condition_check(const SampledPath& path,
                                           const ModulusFn& m) {
  SufficientCheck out{false, holder_constant(path, 2.0, m), kNaN, false};
  try {
    out.I = modulus_integral(m, m).value;
  } catch (const DivergentError&) {
    out.divergent = true;
  }
  out.predicted = std::isfinite(out.C) && !out.divergent;
  return out;
}

EnhancementValue enhancement_value(const SampledPath& path, double s, double t,
                                   const std::vector<Partition>& schedule,
                                   double tol) {
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  const std::size_t is = path.index_of(s), it = path.index_of(t);
  if (is > it) throw ValidationError("enhancement value needs s <= t");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i].grid_size() != path.size())
      throw ValidationError("schedule belongs to another grid");
    if (i > 0 && !schedule[i - 1].is_subset_of(schedule[i]))
      throw ValidationError("schedule not nested at level " +
                            std::to_string(i));
  }
  EnhancementValue out{Status::inconclusive, {}, std::nullopt};
  std::vector<double> diffs;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const SampledPath lin =
        interpolate_onto(restrict(path, schedule[i]), path.times());
    out.levels.push_back(area_pl(lin, is, it));
    diffs.push_back(i ? (out.levels[i] - out.levels[i - 1]).frobenius() : kNaN);
  }
  out.status = classify_levels(out.levels, diffs, tol);
  if (out.status == Status::converged) out.value = out.levels.back();
  return out;
}

}  // namespace roughlab
