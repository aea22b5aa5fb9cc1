#include "roughlab/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace roughlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
// Terms past this index are below 2^-500 and their frequencies overflow.
constexpr long kEvalCap = 500;

struct KahanSum {
  long double s = 0.0L, c = 0.0L;
  void add(long double x) {
    const long double y = x - c;
    const long double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

void check_K(const BlockIndex& blocks, long K) {
  if (K > blocks.l.back() - 1)
    throw ValidationError("truncation K=" + std::to_string(K) +
                          " exceeds the last block end " +
                          std::to_string(blocks.l.back() - 1));
}

}  // namespace

int BlockIndex::block_of(long k) const {
  auto it = std::upper_bound(l.begin(), l.end(), k);
  if (it == l.begin() || it == l.end()) return 0;
  return static_cast<int>(it - l.begin());
}

BlockIndex build_weighted_blocks(const std::function<double(long)>& w,
                                 double c, long l1, int count) {
  if (count < 1) throw ValidationError("need at least one block");
  if (l1 < 1) throw ValidationError("l1 must be >= 1");
  BlockIndex b{{l1}, c, BlockKind::weighted};
  long k = l1;
  for (int n = 1; n <= count; ++n) {
    const double target = std::pow(c, n);
    KahanSum s;
    while (static_cast<double>(s.s) < target) {
      if (k > kMaxBlockIndex)
        throw SizeLimitError("blocks infeasible at desk scale (n=" +
                             std::to_string(n) + ")");
      s.add(w(k));
      ++k;
    }
    if (static_cast<double>(s.s) > target + 1.0)
      throw ConsistencyError("block " + std::to_string(n) +
                             " overshoots c^n + 1");
    b.l.push_back(k);
  }
  return b;
}

BlockIndex build_blocks(BlockKind kind, double c_or_unit, long l1, int count) {
  if (l1 < 2) throw ValidationError("l1 must be >= 2");
  auto harmonic = [](long k) { return 1.0 / static_cast<double>(k); };
  if (kind == BlockKind::f_type) {
    if (!(c_or_unit > kPi)) throw ValidationError("f-type blocks need c > pi");
    BlockIndex b = build_weighted_blocks(harmonic, c_or_unit, l1, count);
    b.kind = BlockKind::f_type;
    return b;
  }
  if (kind == BlockKind::g_type) {
    if (count < 1) throw ValidationError("need at least one block");
    BlockIndex b{{l1}, 1.0, BlockKind::g_type};
    long k = l1;
    for (int n = 1; n <= count; ++n) {
      KahanSum s;
      while (static_cast<double>(s.s) < 1.0) {
        if (k > kMaxBlockIndex)
          throw SizeLimitError("blocks infeasible at desk scale (n=" +
                               std::to_string(n) + ")");
        s.add(harmonic(k));
        ++k;
      }
      b.l.push_back(k);
    }
    return b;
  }
  throw ValidationError("weighted blocks need a weight function");
}

std::vector<int> block_signs(const BlockIndex& blocks, long K) {
  std::vector<int> eps(static_cast<std::size_t>(K + 1), 1);
  for (long k = 0; k <= K; ++k) {
    const int n = blocks.block_of(k);
    if (n > 0 && n % 2 == 1) eps[k] = -1;
  }
  return eps;
}

namespace {

LacunarySpec unit_spec(const BlockIndex& blocks, long k_first, long K,
                       bool signed_blocks, bool normalise) {
  if (K < k_first) throw ValidationError("truncation K below first index");
  check_K(blocks, K);
  LacunarySpec s{blocks, k_first, K, {}, {}, {}, true, 0.0};
  double max_norm = 0.0;
  for (long k = k_first; k <= K; ++k) {
    const int n = blocks.block_of(k);
    double norm2 = 1.0;
    if (normalise) {
      double h = 0.0;
      for (long i = blocks.l[n - 1]; i < blocks.l[n]; ++i) h += 1.0 / i;
      norm2 = 1.0 / (kPi * h);
    }
    max_norm = std::max(max_norm, std::sqrt(norm2));
    s.eps.push_back(signed_blocks && n % 2 == 1 ? -1 : 1);
    const double kd = static_cast<double>(k);
    s.coef.push_back(k > 1100 ? 0.0
                              : std::sqrt(norm2) * std::ldexp(1.0, -static_cast<int>(k)) /
                                    std::sqrt(kd));
    s.weight.push_back(norm2 / kd);
  }
  // sum_{k>K} k^{-1/2} 2^{-k} <= 2^{-K} / sqrt(K+1)
  s.tail_bound = max_norm * std::ldexp(1.0, -static_cast<int>(std::min(K, 1100L))) /
                 std::sqrt(static_cast<double>(K + 1));
  return s;
}

}  // namespace

LacunarySpec f_spec(const BlockIndex& blocks, long K) {
  return unit_spec(blocks, blocks.l.front(), K, true, false);
}

LacunarySpec f_tail_spec(const BlockIndex& blocks, int first, long K) {
  if (first < 1 || first > blocks.count())
    throw ValidationError("f_N tail starts outside the blocks");
  return unit_spec(blocks, blocks.l[first - 1], K, true, false);
}

LacunarySpec g_spec(const BlockIndex& blocks, int n) {
  if (n < 1 || n > blocks.count())
    throw ValidationError("g_n: block index out of range");
  BlockIndex one{{blocks.l[n - 1], blocks.l[n]}, blocks.c, blocks.kind};
  return unit_spec(one, one.l[0], one.l[1] - 1, false, true);
}

LacunarySpec modulus_spec(const ModulusFn& m, double p,
                          const std::vector<int>& eps, long K) {
  if (!(p > 1.0)) throw ValidationError("modulus law needs p > 1");
  if (K < 1) throw ValidationError("truncation K must be >= 1");
  if (static_cast<long>(eps.size()) <= K)
    throw ValidationError("sign vector shorter than K");
  BlockIndex b{{1, K + 1}, 0.0, BlockKind::weighted};
  LacunarySpec s{b, 1, K, {}, {}, {}, false, 0.0};
  const double ln4 = std::log(4.0);
  for (long k = 1; k <= K; ++k) {
    const double mk = m.at_log(k * ln4);
    s.eps.push_back(eps[k] < 0 ? -1 : 1);
    s.coef.push_back(mk * std::exp(-k * ln4 / p));
    s.weight.push_back(mk * mk * std::exp(k * ln4 * (1.0 - 2.0 / p)));
  }
  const double r = std::exp(-ln4 / p);
  s.tail_bound = m(1.0) * std::exp(-(K + 1) * ln4 / p) / (1.0 - r);
  return s;
}

Point eval_path(const LacunarySpec& spec, double t) {
  if (t < 0.0 || t > 1.0) throw ValidationError("lacunary path lives on [0,1]");
  double x = 0.0, y = 0.0;
  const long last = std::min(spec.K, kEvalCap);
  for (long k = spec.k_first; k <= last; ++k) {
    const double a = spec.a(k);
    if (a == 0.0) continue;
    const double wt = std::ldexp(t, 2 * static_cast<int>(k));
    const double th = kTwoPi * (wt - std::floor(wt));
    x += a * std::cos(th);
    y += spec.sign(k) * a * std::sin(th);
  }
  return {x, y};
}

TrigPath to_trig_path(const LacunarySpec& spec) {
  std::vector<TrigTerm> terms;
  const long last = std::min(spec.K, kEvalCap);
  for (long k = spec.k_first; k <= last; ++k)
    terms.push_back({spec.a(k),
                     spec.sign(k) * std::ldexp(1.0, 2 * static_cast<int>(k)),
                     0.0});
  return TrigPath(std::move(terms));
}

SampledPath materialize(const LacunarySpec& spec,
                        const std::vector<double>& times) {
  if (spec.K > kMaxMaterializedK)
    throw SizeLimitError("materialization needs K <= " +
                         std::to_string(kMaxMaterializedK));
  std::vector<double> v;
  v.reserve(2 * times.size());
  for (double t : times) {
    const Point p = eval_path(spec, t);
    v.push_back(p[0]);
    v.push_back(p[1]);
  }
  return SampledPath(times, std::move(v), 2);
}

Point eval_rn(int n, double t) {
  if (n < 1) throw ValidationError("r_n needs n >= 1");
  if (t < 0.0 || t > kTwoPi + kAbsTol)
    throw ValidationError("r_n lives on [0, 2 pi]");
  const double r = 1.0 / std::sqrt(static_cast<double>(n));
  return {r * std::cos(n * t), r * std::sin(n * t)};
}

double eval_h(double t) {
  if (t == 0.0) return 0.0;
  if (!(t > 0.0) || t > std::exp(-1.0) + kAbsTol)
    throw ValidationError("h is evaluated on [0, 1/e] only");
  const double c = std::cos(kPi / t);
  return std::sqrt(t) * c * c / std::log(t);
}

double dyadic_kernel(long n) {
  if (n < 1) throw ValidationError("dyadic kernel needs n >= 1");
  if (n > 30) return kTwoPi;
  const double x = kTwoPi * std::ldexp(1.0, -2 * static_cast<int>(n));
  return kTwoPi * std::sin(x) / x;
}

double bracket_sum_closed(const LacunarySpec& spec, long N) {
  KahanSum s;
  const long last = std::min(N - 1, spec.K);
  for (long k = spec.k_first; k <= last; ++k)
    s.add(static_cast<long double>(spec.sign(k) * spec.w(k)) *
          dyadic_kernel(N - k));
  return static_cast<double>(s.s);
}

std::vector<double> bracket_sum_table(const LacunarySpec& spec, long N_lo,
                                      long N_hi) {
  if (N_hi < N_lo) return {};
  constexpr long H = 31;  // dyadic_kernel is exactly 2 pi beyond this lag
  const long top = std::min(N_hi, spec.K);
  std::vector<long double> prefix;
  prefix.reserve(static_cast<std::size_t>(std::max(0L, top - spec.k_first + 2)));
  KahanSum run;
  prefix.push_back(0.0L);
  for (long k = spec.k_first; k <= top; ++k) {
    run.add(static_cast<long double>(spec.sign(k) * spec.w(k)));
    prefix.push_back(run.s);
  }
  auto prefix_to = [&](long k) -> long double {
    if (k < spec.k_first) return 0.0L;
    return prefix[static_cast<std::size_t>(std::min(k, top) - spec.k_first + 1)];
  };
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(N_hi - N_lo + 1));
  for (long N = N_lo; N <= N_hi; ++N) {
    const long split = N - H;  // k <= split sees the limiting kernel
    long double v = static_cast<long double>(kTwoPi) * prefix_to(split);
    const long last = std::min(N - 1, spec.K);
    for (long k = std::max(spec.k_first, split + 1); k <= last; ++k)
      v += static_cast<long double>(spec.sign(k) * spec.w(k)) *
           dyadic_kernel(N - k);
    out.push_back(static_cast<double>(v));
  }
  return out;
}

double block_sum_sjN(const LacunarySpec& spec, int j, long N) {
  const BlockIndex& b = spec.blocks;
  if (j < 1 || j > b.count())
    throw ValidationError("block index j out of range");
  if (N < b.l[j]) throw ValidationError("s_j^N needs N >= l_{j+1}");
  KahanSum s;
  for (long k = b.l[j - 1]; k < b.l[j]; ++k)
    s.add(dyadic_kernel(N - k) / static_cast<long double>(k));
  const double v = static_cast<double>(s.s);
  const double cj = std::pow(b.c, j);
  if (!(4.0 * cj <= v && v <= kTwoPi * (cj + 1.0)))
    throw ConsistencyError("s_j^N = " + format_real(v) +
                           " outside [4 c^j, 2 pi (c^j + 1)]");
  return v;
}

double necessity_bracket(const ModulusFn& m1, const ModulusFn& m2, double p,
                         const std::vector<int>& eps, long N) {
  if (!(p > 1.0)) throw ValidationError("necessity pair needs p > 1");
  if (N >= 2 && static_cast<long>(eps.size()) < N)
    throw ValidationError("sign vector shorter than N");
  const double ln4 = std::log(4.0);
  KahanSum s;
  for (long k = 1; k <= N - 1; ++k) {
    const double u = k * ln4;
    s.add(static_cast<long double>((eps[k] < 0 ? -1.0 : 1.0) * m1.at_log(u) *
                                   m2.at_log(u)) *
          dyadic_kernel(N - k));
  }
  return static_cast<double>(s.s);
}

std::pair<SampledPath, SampledPath> necessity_pair(
    const ModulusFn& m1, const ModulusFn& m2, double p,
    const std::vector<int>& eps, long K, const std::vector<double>& times) {
  if (!(p > 1.0)) throw ValidationError("necessity pair needs p > 1");
  if (K > kMaxMaterializedK)
    throw SizeLimitError("materialization needs K <= " +
                         std::to_string(kMaxMaterializedK));
  if (static_cast<long>(eps.size()) <= K)
    throw ValidationError("sign vector shorter than K");
  const double q = p / (p - 1.0);
  const double ln4 = std::log(4.0);
  std::vector<double> a1(K + 1), a2(K + 1);
  for (long k = 1; k <= K; ++k) {
    a1[k] = m1.at_log(k * ln4) * std::exp(-k * ln4 / p);
    a2[k] = (eps[k] < 0 ? -1.0 : 1.0) * m2.at_log(k * ln4) *
            std::exp(-k * ln4 / q);
  }
  std::vector<double> x(times.size()), y(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    double sx = 0.0, sy = 0.0;
    for (long k = 1; k <= K; ++k) {
      const double wt = std::ldexp(times[i], 2 * static_cast<int>(k));
      const double th = kTwoPi * (wt - std::floor(wt));
      sx += a1[k] * std::cos(th);
      sy += a2[k] * std::sin(th);
    }
    x[i] = sx;
    y[i] = sy;
  }
  return {SampledPath::from_scalar(times, x), SampledPath::from_scalar(times, y)};
}

}  // namespace roughlab
