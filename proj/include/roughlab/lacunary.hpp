#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "roughlab/area.hpp"
#include "roughlab/modulus.hpp"
#include "roughlab/path_core.hpp"

namespace roughlab {

inline constexpr double kDefaultBlockC = 3.2;
inline constexpr long kMaxBlockIndex = 10000000;
inline constexpr int kMaxMaterializedK = 10;

enum class BlockKind { f_type, g_type, weighted };

/// l_1 < l_2 < ... ; block n is {l_n, ..., l_{n+1} - 1}.
struct BlockIndex {
  std::vector<long> l;
  double c;
  BlockKind kind;

  int count() const { return static_cast<int>(l.size()) - 1; }
  /// 1-based block of k, 0 when k lies outside every block.
  int block_of(long k) const;
};

/// Greedy harmonic blocks: f-type sums reach c^n (c > pi), g-type reach 1.
BlockIndex build_blocks(BlockKind kind, double c_or_unit, long l1, int count);

/// Blocks whose weights w(k) <= 1 sum to c^n on block n.
BlockIndex build_weighted_blocks(const std::function<double(long)>& w,
                                 double c, long l1, int count);

/// eps[k] = (-1)^n for k in block n, +1 elsewhere; size K + 1.
std::vector<int> block_signs(const BlockIndex& blocks, long K);

/// sum_{k = k_first}^{K} a_k exp(2 pi i eps_k 4^k t).
struct LacunarySpec {
  BlockIndex blocks;
  long k_first;
  long K;
  std::vector<int> eps;       // indexed by k - k_first
  std::vector<double> coef;   // a_k, indexed by k - k_first
  std::vector<double> weight; // a_k^2 4^k, indexed by k - k_first
  bool unit_law;
  double tail_bound;

  int sign(long k) const { return eps[k - k_first]; }
  double a(long k) const { return coef[k - k_first]; }
  double w(long k) const { return weight[k - k_first]; }
};

/// f: a_k = k^{-1/2} 2^{-k}, eps_k = (-1)^n on block n, k in [l_1, K].
LacunarySpec f_spec(const BlockIndex& blocks, long K);
/// f_N: the blocks of f from block `first` on.
LacunarySpec f_tail_spec(const BlockIndex& blocks, int first, long K);
/// g_n: block n only, eps = +1, normalised by (pi sum 1/k)^{-1/2}.
LacunarySpec g_spec(const BlockIndex& blocks, int n);
/// a_k = m(4^{-k}) 4^{-k/p}, k in [1, K], signs given per k.
LacunarySpec modulus_spec(const ModulusFn& m, double p,
                          const std::vector<int>& eps, long K);

Point eval_path(const LacunarySpec& spec, double t);
TrigPath to_trig_path(const LacunarySpec& spec);
/// Samples on a grid; refuses K above the desk-scale cap.
SampledPath materialize(const LacunarySpec& spec,
                        const std::vector<double>& times);

Point eval_rn(int n, double t);
double eval_h(double t);

/// 4^n sin(2 pi 4^{-n}) = 2 pi sinc(2 pi 4^{-n}); eps flips the sign.
double dyadic_kernel(long n);

/// <f, D_N>: the bracket sum over t_l = l 4^{-N} in closed form.
double bracket_sum_closed(const LacunarySpec& spec, long N);

/// bracket_sum_closed for every N in [N_lo, N_hi] in O(1) amortized each.
std::vector<double> bracket_sum_table(const LacunarySpec& spec, long N_lo,
                                      long N_hi);

/// s_j^N for the unit law; throws ConsistencyError on a bound violation.
double block_sum_sjN(const LacunarySpec& spec, int j, long N);

/// Closed-form bracket sum of the modulus-driven cos/sin pair on D_N.
double necessity_bracket(const ModulusFn& m1, const ModulusFn& m2, double p,
                         const std::vector<int>& eps, long N);

/// gamma1 = sum m1(4^-k) 4^{-k/p} cos(2 pi 4^k t),
/// gamma2 = sum eps_k m2(4^-k) 4^{-k/q} sin(2 pi 4^k t), k = 1..K.
std::pair<SampledPath, SampledPath> necessity_pair(
    const ModulusFn& m1, const ModulusFn& m2, double p,
    const std::vector<int>& eps, long K, const std::vector<double>& times);

}  // namespace roughlab
