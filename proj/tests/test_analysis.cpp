#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fac/analysis.hpp>
#include <fac/rng.hpp>

#include "oracles.hpp"

using fac::MetricsRow;

namespace {

std::vector<std::pair<long, double>> curve_of(std::vector<double> vals) {
  std::vector<std::pair<long, double>> c;
  for (std::size_t i = 0; i < vals.size(); ++i)
    c.emplace_back(static_cast<long>((i + 1) * 1000), vals[i]);
  return c;
}

// Duplicate distribution: one value with mass (lambda+1)/m,
// m - lambda - 1 values with mass 1/m.
std::vector<double> duplicate_pmf(long m, long lambda) {
  std::vector<double> p{static_cast<double>(lambda + 1) / m};
  for (long i = 0; i < m - lambda - 1; ++i) p.push_back(1.0 / m);
  return p;
}

}  // namespace

TEST_CASE("convergence point on simple curves") {
  const auto mono = curve_of({0.0, 0.5, 0.8, 0.95, 1.0});
  CHECK(fac::convergence_point(mono) == 4000);  // 0.95 >= 0.9 * 1.0

  const auto constant = curve_of({3.0, 3.0, 3.0});
  CHECK(fac::convergence_point(constant) == 1000);

  const auto dip = curve_of({0.0, 0.95, 0.2, 0.97, 1.0});
  CHECK(fac::convergence_point(dip) == 4000);  // re-entry after the dip

  CHECK_THROWS_AS(
      fac::convergence_point(std::span<const std::pair<long, double>>{}),
      fac::EmptyCurve);
}

TEST_CASE("convergence point handles all-negative curves") {
  const auto neg = curve_of({-200.0, -150.0, -120.0, -105.0, -100.0});
  // shifted: 0,50,80,95,100; band >= 90
  CHECK(fac::convergence_point(neg) == 4000);
}

TEST_CASE("convergence point equals the exhaustive-suffix oracle") {
  fac::Rng rng(81);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> vals;
    const int n = 1 + static_cast<int>(rng.index(30));
    for (int i = 0; i < n; ++i) vals.push_back(rng.uniform(-100, 100));
    const auto curve = curve_of(vals);
    CHECK(fac::convergence_point(curve) == oracles::cp_exhaustive(curve));
  }
}

TEST_CASE("metric deltas reproduce the published fixtures") {
  // Pendulum(SAC): buffers 20000 vs 11412, rewards -143.97 vs -144.66
  MetricsRow base{17600, 20000, -143.97, 87.80};
  MetricsRow fac_row{17600, 11412, -144.66, 88.53};
  const auto d = fac::metric_deltas(base, fac_row);
  CHECK(d.delta_buffer == doctest::Approx(42.94));
  CHECK(d.p == doctest::Approx(1.75).epsilon(0.02 / 1.75));
  CHECK(d.delta_reward == doctest::Approx(-0.47).epsilon(0.02));

  // MC(SAC): CP 30696 vs 23089
  MetricsRow mc_base{30696, 50000, -7.01, 0.09};
  MetricsRow mc_fac{23089, 10001, -7.09, 0.41};
  const auto dmc = fac::metric_deltas(mc_base, mc_fac);
  CHECK(dmc.delta_cp == doctest::Approx(24.78).epsilon(1e-4));
}

TEST_CASE("metric deltas degenerate inputs") {
  MetricsRow zero{0, 100, 1.0, 0.0};
  MetricsRow ok{10, 100, 1.0, 0.0};
  CHECK_THROWS_AS(fac::metric_deltas(zero, ok), fac::DivisionDegenerate);
}

TEST_CASE("translation keeps the reward-delta sign") {
  MetricsRow base{100, 1000, -50.0, 0.0};
  MetricsRow worse{100, 800, -60.0, 0.0};
  MetricsRow better{100, 800, -40.0, 0.0};
  CHECK(fac::metric_deltas(base, worse).delta_reward < 0.0);
  CHECK(fac::metric_deltas(base, better).delta_reward > 0.0);
}

TEST_CASE("entropy delta closed form") {
  CHECK(fac::entropy_delta_closed_form(10, 0) == 0.0);
  CHECK(fac::entropy_delta_closed_form(4, 1) ==
        doctest::Approx(2.0 * std::log(2.0) / 4.0).epsilon(1e-12));
  CHECK(fac::entropy_delta_closed_form(100, 3) ==
        doctest::Approx(4.0 * std::log(4.0) / 100.0).epsilon(1e-12));
  CHECK_THROWS_AS(fac::entropy_delta_closed_form(2, 0), fac::DomainError);
  CHECK_THROWS_AS(fac::entropy_delta_closed_form(10, 10), fac::DomainError);
}

TEST_CASE("brute-force entropy basics") {
  std::vector<double> uniform(8, 1.0 / 8.0);
  CHECK(fac::entropy_brute_force(uniform) ==
        doctest::Approx(std::log(8.0)).epsilon(1e-12));
  std::vector<double> point{1.0};
  CHECK(fac::entropy_brute_force(point) == 0.0);
  std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(fac::entropy_brute_force(bad), fac::NotADistribution);
  std::vector<double> neg{1.5, -0.5};
  CHECK_THROWS_AS(fac::entropy_brute_force(neg), fac::NotADistribution);
}

TEST_CASE("closed form equals brute-force entropy difference") {
  for (long m : {4L, 10L, 100L, 1000L}) {
    for (long lambda = 0; lambda <= m - 2; lambda += std::max(1L, m / 7)) {
      const double uniform = std::log(static_cast<double>(m));
      const double dup = fac::entropy_brute_force(duplicate_pmf(m, lambda));
      const double delta = uniform - dup;
      CHECK(fac::entropy_delta_closed_form(m, lambda) ==
            doctest::Approx(delta).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("variance ratio experiment") {
  // zeta = 0: both schemes identical in distribution
  const double unit = fac::variance_ratio_experiment(16, 0, 20000, 91);
  CHECK(unit == doctest::Approx(1.0).epsilon(0.1));

  const double r = fac::variance_ratio_experiment(4, 2, 50000, 92);
  CHECK(r == doctest::Approx(2.5).epsilon(0.15));

  const double r2 = fac::variance_ratio_experiment(32, 4, 100000, 93);
  CHECK(r2 == doctest::Approx(1.625).epsilon(0.15));

  CHECK_THROWS_AS(fac::variance_ratio_experiment(4, 4, 100, 1),
                  fac::DomainError);
}

TEST_CASE("duplicate census") {
  fac::PartitionSpec spec;
  spec.kappa = {0};
  spec.lower = {0.0};
  spec.upper = {1.0};
  spec.mu = {10};

  fac::PlainBuffer distinct(100);
  for (int i = 0; i < 10; ++i) {
    fac::Transition t;
    t.s = fac::Vector::Constant(1, 0.05 + 0.1 * i);  // one per cell
    t.a = fac::Vector::Zero(1);
    t.r = static_cast<double>(i) * 10.0;
    t.s_next = t.s;
    distinct.insert(t);
  }
  CHECK(fac::duplicate_census(distinct, spec, 0.2) == 0);

  fac::PlainBuffer twice(100);
  fac::Transition t;
  t.s = fac::Vector::Constant(1, 0.55);
  t.a = fac::Vector::Zero(1);
  t.r = 1.0;
  t.s_next = t.s;
  twice.insert(t);
  twice.insert(t);
  CHECK(fac::duplicate_census(twice, spec, 0.2) == 1);
}

TEST_CASE("frugal census stays below plain census on a duplicate-heavy stream") {
  fac::PartitionSpec spec;
  spec.kappa = {0};
  spec.lower = {0.0};
  spec.upper = {1.0};
  spec.mu = {5};

  fac::PlainBuffer plain(10000);
  fac::FrugalBuffer frugal(10000, fac::GateConfig{});
  frugal.activate(spec);

  fac::Rng rng(97);
  for (int i = 0; i < 2000; ++i) {
    fac::Transition t;
    t.s = fac::Vector::Constant(1, rng.uniform(0, 1));
    t.a = fac::Vector::Zero(1);
    t.r = rng.index(5) * 0.25;  // heavy exact-duplicate structure
    t.s_next = t.s;
    plain.insert(t);
    frugal.insert(t);
  }
  const auto cp = fac::duplicate_census(plain, spec, 0.2);
  const auto cf = fac::duplicate_census(frugal, spec, 0.2);
  CHECK(cf < cp);
}

TEST_CASE("run metrics summarizes the eval curve") {
  fac::RunLog log;
  log.final_buffer = 1234;
  log.evals = {{1000, -200.0, 5.0}, {2000, -120.0, 4.0}, {3000, -100.0, 3.0}};
  const auto row = fac::run_metrics(log);
  CHECK(row.buffer_size == 1234);
  CHECK(row.reward_mean == -100.0);
  CHECK(row.reward_std == 3.0);
  CHECK(row.cp == 3000);  // shifted curve 0,80,100: only the last is in band
}
