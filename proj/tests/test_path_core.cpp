#include "doctest.h"
#include "oracles.hpp"
#include "roughlab/path_core.hpp"

#include <sstream>

using namespace roughlab;

namespace {

SampledPath triangle() {
  return SampledPath::from_points({0.0, 1.0 / 3, 2.0 / 3, 1.0},
                                  {{0, 0}, {1, 0}, {0, 1}, {0, 0}});
}

}  // namespace

TEST_CASE("path validation") {
  CHECK_THROWS_AS(SampledPath({0.0}, {1.0}, 1), ValidationError);
  CHECK_THROWS_AS(SampledPath({0.0, 0.0}, {1.0, 2.0}, 1), ValidationError);
  CHECK_THROWS_AS(SampledPath({0.5, 1.0}, {1.0, 2.0}, 1), ValidationError);
  CHECK_THROWS_AS(SampledPath({0.0, 1.0}, {1.0}, 1), ValidationError);
  CHECK_NOTHROW(SampledPath({0.0, 1.0}, {1.0, 2.0}, 1));
}

TEST_CASE("increment") {
  auto chord = SampledPath::from_points({0.0, 1.0}, {{0, 0}, {3, 4}});
  CHECK(increment(chord, 0, 1) == Point{3, 4});
  for (std::size_t k = 0; k < 2; ++k) CHECK(increment(chord, k, k) == Point{0, 0});
  CHECK(increment(triangle(), 0, 3) == Point{0, 0});
  CHECK_THROWS_AS(increment(chord, 1, 0), ValidationError);
  CHECK_THROWS_AS(increment(chord, 0, 2), ValidationError);
}

TEST_CASE("lie bracket") {
  const Point e1{1, 0}, e2{0, 1};
  const Tensor2 b = lie_bracket(e1, e2);
  CHECK(b(0, 1) == 1.0);
  CHECK(b(1, 0) == -1.0);
  CHECK(b(0, 0) == 0.0);
  CHECK(lie_bracket(e1, e1).frobenius() == 0.0);
  CHECK_THROWS_AS(lie_bracket(e1, Point{1, 2, 3}), ValidationError);

  oracle::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = rng.index(2, 8);
    Point u(d), v(d), u2(d), v3(d);
    for (std::size_t c = 0; c < d; ++c) {
      u[c] = rng.normal();
      v[c] = rng.normal();
      u2[c] = 2 * u[c];
      v3[c] = 3 * v[c];
    }
    const Tensor2 m = lie_bracket(u, v);
    CHECK(m.is_antisymmetric());
    const Tensor2 scaled = lie_bracket(u2, v3);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double direct = 6 * (u[i] * v[j] - v[i] * u[j]);
        CHECK(scaled(i, j) == doctest::Approx(direct).epsilon(1e-12));
      }
    // cross-norm property of the Frobenius norm
    CHECK(Tensor2::outer(u, v).frobenius() <= norm(u) * norm(v) * (1 + 1e-12));
  }
}

TEST_CASE("partition and restrict") {
  const auto zig = SampledPath::from_scalar({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {0, 1, 0, 1});
  const auto r = restrict(zig, Partition({0, 2, 3}, 4));
  REQUIRE(r.size() == 3);
  CHECK(r.value(0, 0) == 0.0);
  CHECK(r.value(1, 0) == 0.0);
  CHECK(r.value(2, 0) == 1.0);

  const auto same = restrict(zig, Partition::full(4));
  CHECK(same.flat() == zig.flat());
  CHECK(same.times() == zig.times());
  CHECK(restrict(zig, Partition({0, 3}, 4)).size() == 2);

  CHECK_THROWS_AS(Partition({1, 3}, 4), ValidationError);
  CHECK_THROWS_AS(Partition({0, 2}, 4), ValidationError);
  CHECK_THROWS_AS(Partition({0, 2, 2, 3}, 4), ValidationError);
  CHECK_THROWS_AS(restrict(zig, Partition({0, 4}, 5)), ValidationError);
}

TEST_CASE("restrict composes over nested partitions") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.index(3, 60);
    const auto path = oracle::random_path(rng, n, 2);
    const auto d2 = oracle::random_subgrid(rng, n, 0.7);
    // pick D1 as a subset of D2, expressed both ways
    std::vector<std::size_t> d1_in_d2{0}, d1{0};
    for (std::size_t k = 1; k + 1 < d2.size(); ++k)
      if (rng.uniform() < 0.5) {
        d1_in_d2.push_back(k);
        d1.push_back(d2[k]);
      }
    d1_in_d2.push_back(d2.size() - 1);
    d1.push_back(n - 1);
    const auto lhs = restrict(restrict(path, Partition(d2, n)),
                              Partition(d1_in_d2, d2.size()));
    const auto rhs = restrict(path, Partition(d1, n));
    CHECK(lhs.flat() == rhs.flat());
    CHECK(lhs.times() == rhs.times());
  }
}

TEST_CASE("dyadic partition") {
  const auto grid = dyadic_times(5);
  const auto path = SampledPath::from_scalar(grid, std::vector<double>(grid.size(), 0.0));
  const auto d1 = dyadic_partition(path, 1);
  REQUIRE(d1.size() == 5);
  const double expect[] = {0, 0.25, 0.5, 0.75, 1};
  for (std::size_t k = 0; k < 5; ++k) CHECK(path.time(d1[k]) == expect[k]);
  const auto d0 = dyadic_partition(path, 0);
  CHECK(d0.size() == 2);
  for (int N = 1; N <= 5; ++N)
    CHECK(dyadic_partition(path, N).mesh(path) == doctest::Approx(std::ldexp(1.0, -2 * N)).epsilon(1e-14));
  CHECK_THROWS_AS(dyadic_partition(path, 6), ValidationError);

  const auto odd = SampledPath::from_scalar(uniform_times(10), std::vector<double>(10, 0.0));
  CHECK_THROWS_AS(dyadic_partition(odd, 1), ValidationError);
}

TEST_CASE("interpolation") {
  const auto path = SampledPath::from_scalar({0.0, 0.5, 1.0}, {0.0, 2.0, 0.0});
  CHECK(path.eval(0.25)[0] == doctest::Approx(1.0));
  CHECK(path.eval(1.0)[0] == 0.0);
  const auto fine = interpolate_onto(path, {0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(fine.value(1, 0) == doctest::Approx(1.0));
  CHECK(fine.value(2, 0) == 2.0);
  CHECK(fine.value(3, 0) == doctest::Approx(1.0));
}

TEST_CASE("csv round trip at full precision") {
  oracle::Rng rng(3);
  const auto path = oracle::random_path(rng, 20, 3);
  std::stringstream ss;
  write_csv(ss, path);
  CHECK(ss.str().rfind("t,x1,x2,x3\n", 0) == 0);
  const auto back = read_csv(ss);
  CHECK(back.times() == path.times());
  CHECK(back.flat() == path.flat());

  std::stringstream bad("t,x1\n0,1\n0.5\n");
  CHECK_THROWS_AS(read_csv(bad), ValidationError);
  std::stringstream header("time,x\n0,1\n1,2\n");
  CHECK_THROWS_AS(read_csv(header), ValidationError);
}
