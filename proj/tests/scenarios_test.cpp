#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "steerkit/rng.hpp"
#include "steerkit/scenarios.hpp"

namespace {

using namespace steerkit;

// --- rng ----------------------------------------------------------------------------

TEST(CounterRng, DeterministicAndIndexable) {
  CounterRng a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
  EXPECT_EQ(CounterRng(42, 3)(), CounterRng::at(42, 3));
  EXPECT_NE(CounterRng(42)(), CounterRng(43)());
  // SplitMix64 reference output for seed 0, first draw
  EXPECT_EQ(CounterRng::at(0, 0), 0xE220A8397B1DCDAFULL);
}

TEST(CounterRng, DerivedStreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(CounterRng::derive(7, i));
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(CounterRng, UniformMoments) {
  CounterRng rng(5);
  double sum = 0, sum2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sum2 / n - (sum / n) * (sum / n), 1.0 / 12, 2e-3);
}

// --- grid ----------------------------------------------------------------------------

TEST(ParseGrid, Inclusive) {
  const auto g = parse_grid("0:1:0.25");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  EXPECT_EQ(parse_grid("0.3:0.3:0.1"), std::vector<double>{0.3});
  // 0.1 steps do not land exactly on 1.0 in binary
  EXPECT_EQ(parse_grid("0:1:0.1").size(), 11u);
  EXPECT_LE(parse_grid("0:1:0.1").back(), 1.0);
  EXPECT_EQ(parse_grid("0:1:0.3").size(), 4u);
}

TEST(ParseGrid, Rejects) {
  for (const char* bad : {"1:0:0.1", "0:1:0", "0:1:-0.1", "0:1", "a:1:0.1", "0:1:0.1:2", ""})
    EXPECT_THROW(parse_grid(bad), std::invalid_argument) << bad;
}

// --- single points -------------------------------------------------------------------------

TEST(RunQubitGhz, CriteriaDispatch) {
  QubitGhzParams p;
  p.noise_p = 0.5;
  EXPECT_NEAR(std::get<SteeringValue>(run_qubit_ghz(p)).value, 2.0, 1e-10);
  p.criterion = "three-obs";
  EXPECT_NEAR(std::get<SteeringValue>(run_qubit_ghz(p)).value, 3.0, 1e-10);
  p.criterion = "result4";
  p.noise_p = 0.95;
  EXPECT_NEAR(std::get<GenuineSteeringReport>(run_qubit_ghz(p)).sum, 0.6, 1e-10);
  p.criterion = "bogus";
  EXPECT_THROW(run_qubit_ghz(p), std::invalid_argument);
}

TEST(RunCvGhz, CriteriaDispatch) {
  CvGhzParams p;
  p.r = 0.5;
  EXPECT_NEAR(std::get<SteeringValue>(run_cv_ghz(p)).value, std::sqrt(6.0) * std::exp(-1.0), 1e-10);
  p.criterion = "eq2";
  EXPECT_TRUE(std::get<SteeringValue>(run_cv_ghz(p)).verdict);
  p.criterion = "result4";
  EXPECT_NEAR(std::get<GenuineSteeringReport>(run_cv_ghz(p)).sum, 3 * std::sqrt(6.0) * std::exp(-1.0), 1e-10);
  p.target = 4;
  EXPECT_THROW(run_cv_ghz(p), std::invalid_argument);
}

TEST(CvGhz, QuadratureVariances) {
  for (double r = 0.0; r <= 2.0 + 1e-12; r += 0.25) {
    const auto g = cv::cv_ghz(r);
    EXPECT_NEAR(cv::combo_variance(g, cv::QuadratureCombo::x(3, 1) - cv::QuadratureCombo::x(3, 2)),
                2 * std::exp(-2 * r), 1e-10);
    EXPECT_NEAR(cv::combo_variance(g, cv::QuadratureCombo::p(3, 1) + cv::QuadratureCombo::p(3, 2) +
                                          cv::QuadratureCombo::p(3, 3)),
                3 * std::exp(-2 * r), 1e-10);
    for (int j = 1; j <= 3; ++j) {
      const int k = j == 1 ? 2 : 1, m = 6 - j - k;
      EXPECT_NEAR(cv::s_j_fixed_combo(g, j, k, m).value, std::sqrt(6.0) * std::exp(-2 * r), 1e-10);
    }
  }
}

// --- sweeps -----------------------------------------------------------------------------

SweepConfig qubit_sweep() {
  SweepConfig c;
  c.backend = Backend::Qubit;
  c.scenario = "ghz";
  c.parameter = "eta";
  c.grid = parse_grid("0.1:1:0.05");
  c.criterion = "three-obs";
  return c;
}

TEST(Sweep, OrderedAndThreadIndependent) {
  const auto cfg = qubit_sweep();
  const auto one = run_sweep(cfg, 1);
  ASSERT_EQ(one.size(), cfg.grid.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].index, i);
    EXPECT_EQ(one[i].parameter_value, cfg.grid[i]);
    EXPECT_NEAR(std::get<SteeringValue>(one[i].result).value, 3 * (1 - cfg.grid[i]), 1e-10);
  }
  EXPECT_EQ(run_sweep(cfg, 4), one);
  EXPECT_EQ(run_sweep(cfg, 0), one);
}

TEST(Sweep, ShotsDeterministicPerSeed) {
  auto cfg = qubit_sweep();
  cfg.parameter = "noise_p";
  cfg.criterion = "two-obs";
  cfg.grid = {0.2, 0.5, 0.8};
  cfg.shots = 2000;
  cfg.seed = 99;
  const auto a = run_sweep(cfg, 1);
  EXPECT_EQ(run_sweep(cfg, 3), a);
  cfg.seed = 100;
  EXPECT_NE(run_sweep(cfg, 1), a);
  // each point uses its own derived substream
  const auto& first = std::get<ShotEstimate>(a[0].result);
  EXPECT_EQ(first.seed, CounterRng::derive(99, 0));
}

TEST(Sweep, CvAndEavesdrop) {
  SweepConfig c;
  c.backend = Backend::Cv;
  c.scenario = "cv-ghz";
  c.parameter = "r";
  c.grid = {0.0, 0.5, 1.0};
  c.criterion = "eq6";
  const auto recs = run_sweep(c, 2);
  for (const auto& r : recs)
    EXPECT_NEAR(std::get<SteeringValue>(r.result).value, std::sqrt(6.0) * std::exp(-2 * r.parameter_value), 1e-10);

  c.scenario = "eavesdrop";
  c.parameter = "eta";
  c.fixed = {{"r", 1.0}};
  c.grid = {0.0, 0.5, 1.0};
  const auto e = run_sweep(c, 2);
  EXPECT_EQ(std::get<EavesdropRecord>(e[1].result), eavesdrop_point(1.0, 0.5));
}

TEST(Sweep, ValidationErrors) {
  auto bad = qubit_sweep();
  bad.grid = {0.5, 0.5};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = qubit_sweep();
  bad.grid = {};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = qubit_sweep();
  bad.backend = Backend::Cv;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = qubit_sweep();
  bad.parameter = "r";
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = qubit_sweep();
  bad.fixed = {{"colour", 1.0}};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = qubit_sweep();
  bad.criterion = "eq6";
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = qubit_sweep();
  bad.shots = 100;  // three-obs has no shot emulation
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = qubit_sweep();
  bad.criterion = "two-obs";
  bad.shots = 1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = qubit_sweep();
  bad.policy = "guess-harder";
  EXPECT_THROW(run_sweep(bad, 1), std::invalid_argument);
  EXPECT_NO_THROW(qubit_sweep().validate());
}

TEST(Sweep, PointErrorPropagates) {
  auto cfg = qubit_sweep();
  cfg.grid = {0.5, 1.5};  // eta above 1
  EXPECT_THROW(run_sweep(cfg, 2), std::invalid_argument);
}

// --- thresholds -------------------------------------------------------------------------

TEST(Threshold, NamedScenarios) {
  EXPECT_NEAR(threshold_scenario("three-obs-eta").critical, 1.0 / 3.0, 1e-4);
  EXPECT_NEAR(threshold_scenario("two-obs-eta").critical, 0.5, 1e-4);
  EXPECT_NEAR(threshold_scenario("cv-eq6-r").critical, std::log(6.0) / 4, 1e-4);
  EXPECT_NEAR(threshold_scenario("cv-result4-r").critical, std::log(3 * std::sqrt(6.0)) / 2, 1e-4);
  EXPECT_THROW(threshold_scenario("nope"), std::invalid_argument);
  EXPECT_EQ(threshold_scenario_names().size(), 4u);
}

TEST(Threshold, BracketShrinksToTolerance) {
  const auto t = threshold_scenario("three-obs-eta");
  EXPECT_LE(t.high - t.low, kThresholdTolerance);
  EXPECT_LE(t.low, 1.0 / 3.0);
  EXPECT_GE(t.high, 1.0 / 3.0 - 1e-12);
  EXPECT_EQ(t.bound, 2.0);
}

TEST(Threshold, RefinedToleranceMovesLittle) {
  for (const auto& name : threshold_scenario_names()) {
    const double coarse = threshold_scenario(name).critical;
    const double fine = threshold_scenario(name, qubit::MarginalMean{}, 1e-8).critical;
    EXPECT_LT(std::abs(coarse - fine), 1e-3) << name;
  }
}

TEST(Threshold, ConstantGuessPolicyMovesTheThreshold) {
  // With a fixed +1 guess on no-click the x and y inferences lose more than
  // with the marginal mean, so a higher efficiency is needed.
  const double marginal = threshold_scenario("two-obs-eta").critical;
  const double guess = threshold_scenario("two-obs-eta", qubit::ConstantGuess{1.0}).critical;
  EXPECT_GT(guess, marginal);
}

TEST(FindThreshold, GenericBisection) {
  const auto t = find_threshold("x", 0.0, 1.0, [](double x) { return x > 0.3; }, 1e-9);
  EXPECT_NEAR(t.critical, 0.3, 1e-9);
  EXPECT_GT(t.iterations, 0);
  EXPECT_THROW(find_threshold("x", 0.0, 1.0, [](double) { return true; }), NoThresholdError);
  EXPECT_THROW(find_threshold("x", 1.0, 0.0, [](double x) { return x > 0.3; }), std::invalid_argument);
  EXPECT_THROW(find_threshold("x", 0.0, 1.0, [](double x) { return x > 0.3; }, 0.0), std::invalid_argument);
}

// --- shots -------------------------------------------------------------------------------

TEST(Shots, DeterministicInSeed) {
  const auto rho = noisy_ghz(3, 0.5);
  EXPECT_EQ(simulate_shots(rho, {}, 5000, 3), simulate_shots(rho, {}, 5000, 3));
  EXPECT_NE(simulate_shots(rho, {}, 5000, 3).estimate, simulate_shots(rho, {}, 5000, 4).estimate);
}

TEST(Shots, IdealGhzHasNoSpread) {
  const auto est = simulate_shots(noisy_ghz(3, 1.0), {}, 10000, 1);
  EXPECT_LE(std::abs(est.estimate), 5 * est.standard_error + 1e-15);
  EXPECT_EQ(est.estimate, 0.0);
}

TEST(Shots, UnbiasedWithinStandardError) {
  const auto q = simulate_shots(noisy_ghz(3, 0.5), {}, 100000, 11);
  EXPECT_LE(std::abs(q.estimate - 2.0), 5 * q.standard_error);
  EXPECT_GT(q.standard_error, 0.0);

  const auto g = cv::cv_ghz(1.0);
  const auto c = simulate_shots(g, {CriterionId::CvFixedCombo, 1}, 100000, 11);
  EXPECT_LE(std::abs(c.estimate - std::sqrt(6.0) * std::exp(-2.0)), 5 * c.standard_error);
}

TEST(Shots, StandardErrorMatchesSpreadOverSeeds) {
  const auto rho = noisy_ghz(3, 0.5);
  const int seeds = 300;
  double sum = 0, sum2 = 0, se = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto e = simulate_shots(rho, {}, 1000, static_cast<std::uint64_t>(s));
    sum += e.estimate;
    sum2 += e.estimate * e.estimate;
    se += e.standard_error;
  }
  const double mean = sum / seeds;
  const double spread = std::sqrt((sum2 - seeds * mean * mean) / (seeds - 1));
  EXPECT_NEAR(mean, 2.0, 5 * spread / std::sqrt(seeds));
  EXPECT_NEAR(spread / (se / seeds), 1.0, 0.15);
}

TEST(Shots, StandardErrorScalesAsInverseRoot) {
  const auto rho = noisy_ghz(3, 0.5);
  std::vector<double> lx, ly;
  for (std::uint64_t n : {1000, 4000, 16000, 64000}) {
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(simulate_shots(rho, {}, n, 21).standard_error));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, -0.5, 0.1);
}

TEST(Shots, Rejects) {
  EXPECT_THROW(simulate_shots(noisy_ghz(3, 1.0), {}, 1, 0), std::invalid_argument);
  EXPECT_THROW(simulate_shots(noisy_ghz(3, 1.0), {CriterionId::SpinSum3Obs, 3}, 100, 0), std::invalid_argument);
  EXPECT_THROW(simulate_shots(cv::cv_ghz(1.0), {CriterionId::CvProduct, 1}, 100, 0), std::invalid_argument);
}

// --- secret sharing ---------------------------------------------------------------------

TEST(SecretSharing, BothBackends) {
  const auto q = secret_sharing_demo(Backend::Qubit, 3);
  EXPECT_EQ(q.per_target.size(), 3u);
  EXPECT_TRUE(q.all_collective);
  EXPECT_GE(q.min_subset_value, 1 - kSubsetFloorTolerance);
  for (const auto& t : q.per_target) EXPECT_TRUE(t.full_group.verdict);

  const auto c = secret_sharing_demo(Backend::Cv, 3, 1.0);
  EXPECT_TRUE(c.all_collective);
  for (const auto& m : c.monogamy) {
    EXPECT_TRUE(m.satisfied);
    EXPECT_GE(m.product, 1 - 1e-9);
  }

  EXPECT_FALSE(secret_sharing_demo(Backend::Cv, 3, 0.0).all_collective);
  EXPECT_THROW(secret_sharing_demo(Backend::Qubit, 4), std::invalid_argument);
}

// --- eavesdropper ------------------------------------------------------------------------

TEST(Eavesdrop, HalfTransmissionIsSymmetric) {
  for (double r : {0.5, 1.0, 1.5}) {
    const auto rec = eavesdrop_point(r, 0.5);
    EXPECT_LE(std::abs(rec.a_prime.value - rec.eavesdropper.value), 1e-9) << r;
    EXPECT_GE(rec.a_prime.value, 1 - 1e-9) << r;
    EXPECT_GE(rec.eavesdropper.value, 1 - 1e-9) << r;
    EXPECT_TRUE(rec.monogamy_satisfied);
  }
}

TEST(Eavesdrop, EndPoints) {
  const auto full = eavesdrop_point(1.5, 1.0);
  EXPECT_TRUE(full.a_prime.verdict);
  EXPECT_FALSE(full.eavesdropper.verdict);
  const auto g = cv::cv_ghz(1.5);
  EXPECT_NEAR(eavesdrop_point(1.5, 0.0).a_prime.value, std::sqrt(g.var_x(1) * g.var_p(1)), 1e-10);
}

TEST(Eavesdrop, MonotoneInTransmission) {
  const auto sweep = eavesdrop_sweep(1.5, parse_grid("0:1:0.05"));
  EXPECT_TRUE(sweep.monotone);
  for (std::size_t i = 1; i < sweep.records.size(); ++i)
    EXPECT_LE(sweep.records[i].a_prime.value, sweep.records[i - 1].a_prime.value + 1e-12);
}

} // namespace
