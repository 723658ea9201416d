#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fac/partition.hpp>
#include <fac/rng.hpp>

#include <unordered_set>

#include "oracles.hpp"

using fac::Matrix;
using fac::Vector;

namespace {

fac::PartitionSpec one_dim_spec(double lo, double hi, int cells) {
  fac::PartitionSpec spec;
  spec.kappa = {0};
  spec.lower = {lo};
  spec.upper = {hi};
  spec.mu = {cells};
  return spec;
}

}  // namespace

TEST_CASE("build_partition pads bounds by 1% of the range") {
  Matrix omega(2, 1);
  omega << -1.0, 1.0;
  fac::DimensionSelection sel{{0}, {1.0}};
  const auto spec = fac::build_partition(omega, sel, {50});
  CHECK(spec.lower[0] == doctest::Approx(-1.02));
  CHECK(spec.upper[0] == doctest::Approx(1.02));
  CHECK((spec.upper[0] - spec.lower[0]) / 50 == doctest::Approx(0.0408));
}

TEST_CASE("zero-range column widens by 1.0") {
  const Matrix omega = Matrix::Constant(10, 1, 3.0);
  fac::DimensionSelection sel{{0}, {1.0}};
  const auto spec = fac::build_partition(omega, sel, {10});
  CHECK(spec.lower[0] == doctest::Approx(2.0));
  CHECK(spec.upper[0] == doctest::Approx(4.0));
}

TEST_CASE("empty rollout raises DegenerateRollout") {
  Matrix omega(0, 1);
  fac::DimensionSelection sel{{0}, {1.0}};
  CHECK_THROWS_AS(fac::build_partition(omega, sel, {10}),
                  fac::DegenerateRollout);
}

TEST_CASE("cell center maps to its own cell") {
  const auto spec = one_dim_spec(0.0, 1.0, 10);
  Vector s(1);
  s << 0.75;  // center of cell 7
  CHECK(fac::map_state(spec, s).cell == std::vector<std::int32_t>{7});
}

TEST_CASE("out-of-range states clamp to the edge cells") {
  const auto spec = one_dim_spec(0.0, 1.0, 10);
  Vector s(1);
  s << -5.0;
  CHECK(fac::map_state(spec, s).cell == std::vector<std::int32_t>{0});
  s << 42.0;
  CHECK(fac::map_state(spec, s).cell == std::vector<std::int32_t>{9});
}

TEST_CASE("shared boundary belongs to the upper cell") {
  const auto spec = one_dim_spec(0.0, 1.0, 4);
  Vector s(1);
  s << 0.5;
  CHECK(fac::map_state(spec, s).cell ==
        oracles::argmin_cell({0.5}, {0.0}, {1.0}, {4}));
  CHECK(fac::map_state(spec, s).cell == std::vector<std::int32_t>{2});
}

TEST_CASE("non-finite state is rejected") {
  const auto spec = one_dim_spec(0.0, 1.0, 4);
  Vector s(1);
  s << std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(fac::map_state(spec, s), fac::NonFiniteState);
}

TEST_CASE("floor indexing equals brute-force arg-min on 10^4 random points") {
  fac::Rng rng(17);
  fac::PartitionSpec spec;
  spec.kappa = {0, 2};
  spec.lower = {-2.0, 1.0};
  spec.upper = {3.0, 9.0};
  spec.mu = {13, 7};

  for (int i = 0; i < 10000; ++i) {
    Vector s(3);
    s << rng.uniform(-3, 4), rng.uniform(-10, 10), rng.uniform(0, 10);
    const auto got = fac::map_state(spec, s).cell;
    const auto want = oracles::argmin_cell(
        {s(0), s(2)}, spec.lower, spec.upper, {13, 7});
    CHECK(got == want);
  }
}

TEST_CASE("distinct ids never exceed the product of cell counts") {
  fac::Rng rng(23);
  fac::PartitionSpec spec;
  spec.kappa = {0, 1};
  spec.lower = {0.0, 0.0};
  spec.upper = {1.0, 1.0};
  spec.mu = {3, 4};

  std::unordered_set<fac::AbstractStateId, fac::AbstractStateIdHash> seen;
  for (int i = 0; i < 5000; ++i) {
    Vector s(2);
    s << rng.uniform(-1, 2), rng.uniform(-1, 2);
    seen.insert(fac::map_state(spec, s));
  }
  CHECK(seen.size() <= 12);
}

TEST_CASE("mapping inside a half-open cell interval is idempotent") {
  fac::Rng rng(29);
  const auto spec = one_dim_spec(-1.0, 1.0, 20);
  const double width = 2.0 / 20;
  for (int c = 0; c < 20; ++c) {
    for (int k = 0; k < 20; ++k) {
      const double x = -1.0 + c * width + rng.uniform(0.0, width * 0.999);
      Vector s(1);
      s << x;
      CHECK(fac::map_state(spec, s).cell[0] == c);
    }
  }
}
