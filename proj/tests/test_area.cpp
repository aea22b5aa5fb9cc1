#include "doctest.h"
#include "oracles.hpp"
#include "roughlab/area.hpp"
#include "roughlab/lacunary.hpp"
#include "roughlab/variation.hpp"
#include "roughlab/young.hpp"

#include <cmath>
#include <numbers>

using namespace roughlab;

namespace {

constexpr double kPi = std::numbers::pi;

SampledPath triangle() {
  return SampledPath::from_points({0.0, 1.0 / 3, 2.0 / 3, 1.0},
                                  {{0, 0}, {1, 0}, {0, 1}, {0, 0}});
}

double max_abs_diff(const Tensor2& a, const Tensor2& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

bool exactly_antisymmetric(const Tensor2& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != -m(j, i)) return false;
  return true;
}

}  // namespace

TEST_CASE("triangle loop and chord") {
  const auto tri = triangle();
  const auto a = area_pl(tri, 0, 3);
  CHECK(a(0, 1) == doctest::Approx(oracle::shoelace(tri, 0, 3)).epsilon(1e-15));
  CHECK(a(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(exactly_antisymmetric(a));
  CHECK(area_pl_at(tri, 0.0, 1.0)(0, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(area_pl_at(tri, 0.0, 0.5), ValidationError);
  CHECK_THROWS_AS(area_pl(tri, 2, 1), ValidationError);

  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({1.0 + 0.5 * i, -2.0 + 0.25 * i, 3.0});
  const auto chord = SampledPath::from_points(uniform_times(12), pts);
  for (std::size_t s = 0; s < 12; ++s)
    for (std::size_t t = s; t < 12; ++t) CHECK(area_pl(chord, s, t).frobenius() < 1e-14);
}

TEST_CASE("area agrees with shoelace on random planar paths") {
  oracle::Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto path = oracle::random_path(rng, rng.index(2, 40), 3);
    const AreaTable table(path);
    for (int q = 0; q < 20; ++q) {
      std::size_t s = rng.index(0, path.size() - 1), t = rng.index(0, path.size() - 1);
      if (s > t) std::swap(s, t);
      const auto a = area_pl(path, s, t);
      CHECK(exactly_antisymmetric(a));
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
          CHECK(a(i, j) == doctest::Approx(oracle::shoelace(path, s, t, i, j)).epsilon(1e-11));
      CHECK(max_abs_diff(table(s, t), a) < 1e-11);
      CHECK(table.norm(s, t) == doctest::Approx(a.frobenius()).epsilon(1e-10));
    }
  }
}

TEST_CASE("circle area closed form") {
  const int n = 8;
  const auto times = uniform_times(10000, 2 * kPi);
  std::vector<std::vector<double>> pts;
  for (double s : times) {
    const auto v = eval_rn(n, s);
    pts.push_back({v[0], v[1]});
  }
  const auto path = SampledPath::from_points(times, pts);
  const AreaTable table(path);
  for (std::size_t s = 0; s < times.size(); s += 617)
    for (std::size_t t = s; t < times.size(); t += 911) {
      const double h = times[t] - times[s];
      CHECK(std::abs(2 * table(s, t)(0, 1) - (h - std::sin(n * h) / n)) < 1e-3);
    }
}

TEST_CASE("iterated integrals") {
  const auto chord = SampledPath::from_points({0.0, 0.4, 1.0}, {{0, 0}, {0.8, 1.2}, {2, 3}});
  const auto I = iterated_integral_pl(chord, chord, 0, 2);
  const Point v{2, 3};
  const auto half = Tensor2::outer(v, v) * 0.5;
  CHECK(max_abs_diff(I, half) < 1e-15);

  const auto line = SampledPath::from_scalar(uniform_times(100), uniform_times(100));
  CHECK(iterated_integral_pl(line, line, 0, 99)(0, 0) == doctest::Approx(0.5).epsilon(1e-14));

  oracle::Rng rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = rng.index(2, 50);
    const auto path = oracle::random_path(rng, n, rng.index(2, 4));
    const auto other = oracle::random_path(rng, n, 2).with_times(path.times());
    const IteratedTable cross(path, other);
    for (int q = 0; q < 10; ++q) {
      std::size_t s = rng.index(0, n - 1), t = rng.index(0, n - 1);
      if (s > t) std::swap(s, t);
      const auto II = iterated_integral_pl(path, path, s, t);
      CHECK(max_abs_diff(II.antisymmetric_part(), area_pl(path, s, t)) < 1e-12 * (1 + II.frobenius()));
      const auto IJ = iterated_integral_pl(path, other, s, t);
      CHECK(max_abs_diff(cross(s, t), IJ) < 1e-11 * (1 + IJ.frobenius()));
      // symmetric part is half the outer product of the increment
      const auto inc = increment(path, s, t);
      const auto sym = (II + II.transpose()) * 0.5;
      CHECK(max_abs_diff(sym, Tensor2::outer(inc, inc) * 0.5) < 1e-11 * (1 + II.frobenius()));
    }
  }
  const auto short_path = SampledPath::from_scalar({0.0, 1.0}, {0, 1});
  CHECK_THROWS_AS(iterated_integral_pl(line, short_path, 0, 1), ValidationError);
}

TEST_CASE("bracket sum and riemann identities") {
  const auto still = SampledPath::from_points(uniform_times(5), std::vector<std::vector<double>>(5, {1.0, 2.0}));
  CHECK(riemann_bracket_sum(still, Partition::full(5)).frobenius() == 0.0);

  oracle::Rng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = rng.index(2, 60);
    const auto path = oracle::random_path(rng, n, rng.index(2, 4));
    const Partition D(oracle::random_subgrid(rng, n), n);
    const auto coarse = restrict(path, D);
    const auto A = area_pl(coarse, 0, coarse.size() - 1);
    const auto br = riemann_bracket_sum(path, D);
    const auto ends = lie_bracket(path.point(0), path.point(n - 1));
    const double scale = 1 + br.frobenius();
    CHECK(max_abs_diff(A * 2.0, br - ends) < 1e-12 * scale);

    const auto trap = riemann_sum(path, path, D, RiemannRule::trapezoid);
    const auto y0 = path.point(0), yT = path.point(n - 1);
    Point mid(path.dim()), inc(path.dim());
    for (std::size_t c = 0; c < path.dim(); ++c) {
      mid[c] = 0.5 * (y0[c] + yT[c]);
      inc[c] = yT[c] - y0[c];
    }
    CHECK(max_abs_diff(trap, A + Tensor2::outer(mid, inc)) < 1e-12 * (1 + trap.frobenius()));
  }
}

TEST_CASE("chen identity") {
  oracle::Rng rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = rng.index(3, 25);
    const auto path = oracle::random_path(rng, n, rng.index(2, 4));
    const TwoParamFn A = [&](std::size_t s, std::size_t t) { return area_pl(path, s, t); };
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t u = s; u < n; ++u)
        for (std::size_t t = u; t < n; ++t) CHECK(chen_defect(A, path, s, u, t) <= 1e-12);
  }
  const auto zero = SampledPath::from_scalar(uniform_times(6), std::vector<double>(6, 0.0));
  const auto times = zero.times();
  const TwoParamFn gap = [&](std::size_t s, std::size_t t) {
    Tensor2 m(1, 1);
    m(0, 0) = times[t] - times[s];
    return m;
  };
  CHECK(chen_defect(gap, zero, 0, 2, 5) < 1e-15);
  const TwoParamFn planted = [&](std::size_t s, std::size_t t) {
    Tensor2 m = gap(s, t);
    if (s == 0 && t == 5) m(0, 0) += 1.0;
    return m;
  };
  CHECK(chen_defect(planted, zero, 0, 2, 5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(chen_defect(gap, zero, 3, 2, 5), ValidationError);
}

TEST_CASE("bilinearity and scaling") {
  oracle::Rng rng(79);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = rng.index(2, 50), d = rng.index(2, 4);
    const auto g1 = oracle::random_path(rng, n, d);
    const auto g2 = oracle::random_path(rng, n, d).with_times(g1.times());
    std::vector<double> sum(g1.flat().size());
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = g1.flat()[k] + g2.flat()[k];
    const SampledPath g12(g1.times(), sum, d);
    const auto cross = [&](const SampledPath& a, const SampledPath& b) {
      return iterated_integral_pl(a, b, 0, n - 1).antisymmetric_part();
    };
    const auto lhs = area_pl(g12, 0, n - 1);
    const auto rhs = cross(g1, g1) + cross(g1, g2) + cross(g2, g1) + cross(g2, g2);
    CHECK(max_abs_diff(lhs, rhs) < 1e-11 * (1 + lhs.frobenius()));

    const double lam = rng.uniform(-3.0, 3.0);
    const auto sA = area_pl(g1.scaled(lam), 0, n - 1);
    const auto A = area_pl(g1, 0, n - 1);
    CHECK(max_abs_diff(sA, A * (lam * lam)) < 1e-12 * (1 + sA.frobenius()));
  }
}

TEST_CASE("area one-variation under the young bound") {
  oracle::Rng rng(83);
  const double p = 1.5, C = young_constant(p, p);
  for (int trial = 0; trial < 20; ++trial) {
    const auto path = oracle::random_path(rng, rng.index(2, 150), 2);
    const AreaTable table(path);
    const double onevar = grid_pvar_dp(path.size(), 1.0,
                                       [&](std::size_t a, std::size_t b) { return table.norm(a, b); });
    const double pv = p_variation(path, p).value;
    CHECK(onevar <= C * pv * pv);
  }
}

TEST_CASE("trig area") {
  const TrigPath single({{0.7, 3.0, 0.4}});
  const auto times = uniform_times(100001);
  const auto dense = single.sample(times);
  const AreaTable table(dense);
  for (std::size_t s = 0; s < times.size(); s += 9973)
    for (std::size_t t = s; t < times.size(); t += 13007) {
      const auto a = trig_area(single, times[s], times[t]);
      CHECK(exactly_antisymmetric(a));
      CHECK(std::abs(a(0, 1) - table(s, t)(0, 1)) < 1e-6);
      const double h = times[t] - times[s];
      const double closed = 2 * kPi * 0.49 * 3.0 * h - 0.49 * std::sin(2 * kPi * 3.0 * h);
      CHECK(2 * a(0, 1) == doctest::Approx(closed).epsilon(1e-12));
    }
  CHECK(trig_area(single, 0.3, 0.3).frobenius() == 0.0);
  CHECK_THROWS_AS(TrigPath({{1.0, 2.0}, {0.5, 2.0}}), ValidationError);

  // several terms with negative frequencies against dense sampling
  const TrigPath mix({{0.5, 1.0, 0.2}, {0.3, -4.0, 1.1}, {0.2, 7.0, 2.5}});
  const auto dm = mix.sample(times);
  const AreaTable tm(dm);
  for (std::size_t s = 0; s < times.size(); s += 24989)
    for (std::size_t t = s; t < times.size(); t += 17011)
      CHECK(std::abs(trig_area(mix, times[s], times[t])(0, 1) - tm(s, t)(0, 1)) < 1e-6);
}

TEST_CASE("first g-type block drifts at unit rate") {
  const auto blocks = build_blocks(BlockKind::g_type, 1.0, 2, 1);
  REQUIRE(blocks.l == std::vector<long>{2, 5});
  const auto spec = g_spec(blocks, 1);
  const auto trig = to_trig_path(spec);
  const std::size_t stride = 3175;
  const auto times = uniform_times(63 * stride + 1);
  const AreaTable dense(materialize(spec, times));
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = i; j < 64; j += 3) {
      const std::size_t is = i * stride, it = j * stride;
      const double drift = times[it] - times[is];
      const double exact = trig_area(trig, times[is], times[it])(0, 1) - drift;
      const double sampled = dense(is, it)(0, 1) - drift;
      CHECK(std::abs(exact - sampled) < 1e-4);
    }
  // the drift dominates across the whole interval
  CHECK(trig_area(trig, 0.0, 1.0)(0, 1) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("row kernels agree with pairwise norms") {
  oracle::Rng rng(131);
  for (std::size_t d : {2, 3}) {
    const auto p = oracle::random_path(rng, 40, d);
    const auto q = oracle::random_path(rng, 40, d).with_times(p.times());
    const auto r = oracle::random_path(rng, 40, 2).with_times(p.times());
    const AreaTable A(p), B(q);
    const IteratedTable I(p, r), J(q, r);
    std::vector<double> row(40);
    for (std::size_t j = 1; j < 40; ++j) {
      A.norm_row(j, row.data());
      for (std::size_t i = 0; i < j; ++i)
        CHECK(row[i] == doctest::Approx(A.norm(i, j)).epsilon(1e-15));
      A.diff_norm_row(B, j, row.data());
      for (std::size_t i = 0; i < j; ++i)
        CHECK(row[i] == doctest::Approx(A.diff_norm(B, i, j)).epsilon(1e-15));
      I.diff_norm_row(J, j, row.data());
      for (std::size_t i = 0; i < j; ++i)
        CHECK(row[i] == doctest::Approx(I.diff_norm(J, i, j)).epsilon(1e-15));
    }
  }
}
