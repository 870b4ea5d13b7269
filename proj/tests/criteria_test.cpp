#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "steerkit/criteria.hpp"
#include "steerkit/scenarios.hpp"
#include "support/test_support.hpp"

namespace {

using namespace steerkit;
using qubit::DensityMatrix;
using qubit::Pauli;
using qubit::PauliString;
using steerkit::testing::dense_expectation;
using steerkit::testing::dense_pauli;

constexpr double kTol = 1e-10;

DensityMatrix g3() { return DensityMatrix(qubit::ghz(3)); }

// Var(T - P) from dense matrices.
double dense_difference_variance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& t, const Eigen::MatrixXcd& p) {
  const Eigen::MatrixXcd d = t - p;
  const double m = dense_expectation(rho, d);
  return dense_expectation(rho, d * d) - m * m;
}

// --- spin sums ---------------------------------------------------------------------

TEST(SpinTwoObs, Examples) {
  EXPECT_NEAR(ghz_two_obs(g3(), 3).value, 0.0, kTol);
  EXPECT_TRUE(ghz_two_obs(g3(), 3).verdict);
  EXPECT_NEAR(ghz_two_obs(noisy_ghz(3, 0.5), 3).value, 2.0, kTol);
  EXPECT_NEAR(ghz_two_obs(DensityMatrix::maximally_mixed(3), 3).value, 4.0, kTol);
  EXPECT_FALSE(ghz_two_obs(DensityMatrix::maximally_mixed(3), 3).verdict);
  EXPECT_EQ(ghz_two_obs(g3(), 3).bound, 1.0);
}

TEST(SpinTwoObs, ZeroOnIdealGhzForEveryN) {
  for (int n = 3; n <= 8; ++n)
    for (int t = 1; t <= n; ++t) EXPECT_NEAR(ghz_two_obs(DensityMatrix(qubit::ghz(n)), t).value, 0.0, 1e-12);
}

TEST(SpinTwoObs, LinearInNoiseWeight) {
  // each component contributes 2(1 - p)
  for (double p : {0.0, 0.25, 0.6, 0.95}) EXPECT_NEAR(ghz_two_obs(noisy_ghz(3, p), 3).value, 4 * (1 - p), kTol);
}

TEST(SpinTwoObs, MatchesDenseOracleOnRandomStates) {
  steerkit::testing::Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXcd rho = steerkit::testing::random_density_entries(3, 1 + static_cast<int>(rng() % 3), rng);
    const auto px = PauliString::parse("YYI");
    const auto py = PauliString::parse("XYI");
    const double lib = spin_two_obs(DensityMatrix(rho), {{1, 2}, 3}, px, py).value;
    const double oracle = dense_difference_variance(rho, dense_pauli("IIX"), dense_pauli("YYI")) +
                          dense_difference_variance(rho, dense_pauli("IIY"), dense_pauli("XYI"));
    EXPECT_NEAR(lib, oracle, 1e-12);
  }
}

TEST(SpinThreeObs, Examples) {
  EXPECT_NEAR(ghz_three_obs(g3(), 3).value, 0.0, kTol);
  EXPECT_EQ(ghz_three_obs(g3(), 3).bound, 2.0);
  const auto half = ghz_three_obs(g3(), 3, {0.5, qubit::MarginalMean{}});
  EXPECT_NEAR(half.value, 1.5, kTol);
  EXPECT_TRUE(half.verdict);
  // value 3(1 - eta) equals the bound at eta = 1/3
  EXPECT_NEAR(ghz_three_obs(g3(), 3, {1.0 / 3.0, qubit::MarginalMean{}}).value, 2.0, 1e-12);
  EXPECT_FALSE(ghz_three_obs(g3(), 3, {0.2, qubit::MarginalMean{}}).verdict);
}

TEST(SpinThreeObs, ProductStateNeverViolates) {
  // Var(T - P) >= Var(T) without correlations, and 3 - |r|^2 >= 2 for a qubit.
  steerkit::testing::Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXcd a = steerkit::testing::haar_vector(2, rng);
    const Eigen::VectorXcd b = steerkit::testing::haar_vector(1, rng);
    Eigen::VectorXcd psi(8);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) psi(2 * i + j) = a(i) * b(j);
    const DensityMatrix rho{qubit::PureState(psi)};
    const auto v = ghz_three_obs(rho, 3);
    EXPECT_GE(v.value, 2.0 - 1e-9);
    EXPECT_FALSE(v.verdict);
  }
}

TEST(BestSpinTwoObs, MatchesBruteForceOverMenu) {
  steerkit::testing::Rng rng(107);
  const char menu[] = "XYZ";
  const Pauli pmenu[] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd rho = steerkit::testing::random_density_entries(3, 1 + static_cast<int>(rng() % 3), rng);
    double oracle = 0.0;
    for (const char* t : {"IIX", "IIY"}) {
      double best = 1e300;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          best = std::min(best, steerkit::testing::brute_force_inference(rho, 3, {1, 2}, std::string{menu[a], menu[b]},
                                                                          dense_pauli(t)));
      oracle += best;
    }
    EXPECT_NEAR(best_spin_two_obs(DensityMatrix(rho), {{1, 2}, 3}, pmenu).value, oracle, 1e-10);
  }
}

TEST(BestSpinTwoObs, NeverWorseThanFixedPredictors) {
  steerkit::testing::Rng rng(109);
  const Pauli menu[] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = steerkit::testing::random_density(3, 1 + static_cast<int>(rng() % 4), rng);
    EXPECT_LE(best_spin_two_obs(rho, {{1, 2}, 3}, menu).value, ghz_two_obs(rho, 3).value + 1e-12);
  }
  EXPECT_THROW(best_spin_two_obs(g3(), {{1, 2}, 3}, {}), std::invalid_argument);
}

// --- CV products -----------------------------------------------------------------

TEST(BestCvProduct, GhzAndVacuum) {
  const auto g = cv::cv_ghz(1.0);
  const auto full = best_cv_product(g, {{2, 3}, 1}, 36);
  EXPECT_TRUE(full.verdict);
  EXPECT_LE(full.value, cv::s_j_fixed_combo(g, 1, 2, 3).value + 1e-12);
  EXPECT_NEAR(best_cv_product(cv::vacuum(3), {{2, 3}, 1}, 12).value, 1.0, 1e-12);
  EXPECT_THROW(best_cv_product(g, {{2, 3}, 1}, 0), std::invalid_argument);
}

TEST(BestCvProduct, TwoModeSqueezedClosedForm) {
  // Var(x1 | x2) = Var(p1 | p2) = 1 / cosh 2r
  for (double r : {0.2, 0.7, 1.3}) {
    const auto v = best_cv_product(cv::two_mode_squeezed(r), {{2}, 1}, 4);
    EXPECT_NEAR(v.value, 1 / std::cosh(2 * r), 1e-10);
  }
}

// --- verdict -----------------------------------------------------------------------

TEST(SteeringValue, VerdictIsStrict) {
  EXPECT_FALSE(SteeringValue::make(CriterionId::CvProduct, {{2}, 1}, 1.0).verdict);
  EXPECT_TRUE(SteeringValue::make(CriterionId::CvProduct, {{2}, 1}, std::nextafter(1.0, 0.0)).verdict);
  EXPECT_FALSE(SteeringValue::make(CriterionId::SpinSum3Obs, {{2}, 1}, 2.0).verdict);
  EXPECT_TRUE(SteeringValue::make(CriterionId::SpinSum3Obs, {{2}, 1}, 1.99).verdict);
  EXPECT_EQ(criterion_bound(CriterionId::SpinSum2Obs), 1.0);
  EXPECT_EQ(criterion_bound(CriterionId::CvFixedCombo), 1.0);
}

TEST(CriterionId, StringRoundTrip) {
  for (auto id : {CriterionId::CvProduct, CriterionId::SpinSum2Obs, CriterionId::SpinSum3Obs, CriterionId::CvFixedCombo})
    EXPECT_EQ(criterion_from_string(to_string(id)), id);
  EXPECT_THROW(criterion_from_string("nope"), std::invalid_argument);
}

// --- Result 4 aggregation ------------------------------------------------------------

std::vector<SteeringValue> triple(CriterionId id, double a, double b, double c) {
  return {SteeringValue::make(id, {{2, 3}, 1}, a), SteeringValue::make(id, {{1, 3}, 2}, b),
          SteeringValue::make(id, {{1, 2}, 3}, c)};
}

TEST(Result4Aggregate, SumAndVerdict) {
  const auto r = result4_aggregate(triple(CriterionId::CvFixedCombo, 0.4, 0.4, 0.4));
  EXPECT_NEAR(r.sum, 1.2, 1e-15);
  EXPECT_FALSE(r.genuine);
  EXPECT_TRUE(result4_aggregate(triple(CriterionId::CvFixedCombo, 0.3, 0.3, 0.3)).genuine);
  EXPECT_FALSE(result4_aggregate(triple(CriterionId::SpinSum2Obs, 0.5, 0.25, 0.25)).genuine);  // sum == 1
}

TEST(Result4Aggregate, PermutationInvariant) {
  auto v = triple(CriterionId::SpinSum2Obs, 0.1, 0.25, 0.55);
  const auto base = result4_aggregate(v);
  const auto by_target = [](const SteeringValue& a, const SteeringValue& b) {
    return a.partition.target_site < b.partition.target_site;
  };
  int seen = 0;
  do {
    const auto r = result4_aggregate(v);
    EXPECT_DOUBLE_EQ(r.sum, base.sum);
    EXPECT_EQ(r.genuine, base.genuine);
    ++seen;
  } while (std::next_permutation(v.begin(), v.end(), by_target));
  EXPECT_EQ(seen, 6);
}

TEST(Result4Aggregate, RejectsMalformedInput) {
  auto v = triple(CriterionId::CvProduct, 0.1, 0.1, 0.1);
  EXPECT_THROW(result4_aggregate(std::span(v).first(2)), std::invalid_argument);
  auto dup = v;
  dup[1].partition.target_site = 1;
  EXPECT_THROW(result4_aggregate(dup), std::invalid_argument);
  auto mixed = v;
  mixed[2] = SteeringValue::make(CriterionId::SpinSum2Obs, {{1, 2}, 3}, 0.1);
  EXPECT_THROW(result4_aggregate(mixed), std::invalid_argument);
  EXPECT_THROW(result4_aggregate(triple(CriterionId::SpinSum3Obs, 0.1, 0.1, 0.1)), std::invalid_argument);
}

TEST(Result4, QubitGhzClosedForm) {
  EXPECT_NEAR(ghz_result4(g3()).sum, 0.0, kTol);
  EXPECT_TRUE(ghz_result4(g3()).genuine);
  for (double p : {0.9, 0.95, 0.99}) EXPECT_NEAR(ghz_result4(noisy_ghz(3, p)).sum, 12 * (1 - p), 1e-10);
}

TEST(Result4, QubitDenseOracle) {
  const double p = 0.95;
  const Eigen::VectorXcd psi = qubit::ghz(3).amplitudes();
  const Eigen::MatrixXcd rho = p * psi * psi.adjoint() + (1 - p) * Eigen::MatrixXcd::Identity(8, 8) / 8.0;
  double oracle = 0.0;
  for (int t = 1; t <= 3; ++t)
    for (auto c : {qubit::SpinComponent::X, qubit::SpinComponent::Y}) {
      const auto pred = qubit::ghz_predictor_for_target(3, t, c);
      std::string ts(3, 'I'), ps;
      ts[static_cast<std::size_t>(t - 1)] = c == qubit::SpinComponent::X ? 'X' : 'Y';
      for (Pauli f : pred.factors()) ps += qubit::to_char(f);
      oracle += dense_difference_variance(rho, dense_pauli(ts), pred.sign() * dense_pauli(ps));
    }
  EXPECT_NEAR(ghz_result4(noisy_ghz(3, p)).sum, oracle, 1e-12);
  EXPECT_NEAR(oracle, 0.6, 1e-10);
}

TEST(Result4, OptimalNeverAboveFixed) {
  for (double p : {0.5, 0.9, 1.0}) EXPECT_LE(ghz_result4_optimal(noisy_ghz(3, p)).sum, ghz_result4(noisy_ghz(3, p)).sum + 1e-12);
  for (double r : {0.3, 1.0}) EXPECT_LE(cv_result4_optimal(cv::cv_ghz(r)).sum, cv_result4(cv::cv_ghz(r)).sum + 1e-12);
  EXPECT_NE(ghz_result4_optimal(g3()).method_notes, ghz_result4(g3()).method_notes);
}

TEST(Result4, CvClosedForm) {
  for (double r = 0.0; r <= 2.0; r += 0.25)
    EXPECT_NEAR(cv_result4(cv::cv_ghz(r)).sum, 3 * std::sqrt(6.0) * std::exp(-2 * r), 1e-10);
  const double r_star = std::log(3 * std::sqrt(6.0)) / 2;
  EXPECT_FALSE(cv_result4(cv::cv_ghz(r_star - 1e-3)).genuine);
  EXPECT_TRUE(cv_result4(cv::cv_ghz(r_star + 1e-3)).genuine);
  EXPECT_THROW(cv_result4(cv::vacuum(2)), std::invalid_argument);
}

// --- monogamy ----------------------------------------------------------------------

TEST(Monogamy, ProductAndErrors) {
  const auto a = SteeringValue::make(CriterionId::CvProduct, {{2}, 1}, 0.5);
  const auto c = SteeringValue::make(CriterionId::CvProduct, {{3}, 1}, 2.0);
  const auto m = monogamy_check(a, c);
  EXPECT_EQ(m.product, 1.0);
  EXPECT_TRUE(m.satisfied);
  EXPECT_TRUE(m.exclusive);
  EXPECT_EQ(m.sum, 2.5);
  EXPECT_THROW(monogamy_check(a, SteeringValue::make(CriterionId::CvProduct, {{3}, 2}, 1.0)), std::invalid_argument);
  EXPECT_THROW(monogamy_check(a, SteeringValue::make(CriterionId::CvProduct, {{2}, 1}, 1.0)), std::invalid_argument);
  EXPECT_THROW(monogamy_check(a, SteeringValue::make(CriterionId::SpinSum3Obs, {{3}, 1}, 1.0)),
               std::invalid_argument);
}

TEST(Monogamy, HoldsOnRandomPureGaussianStates) {
  steerkit::testing::Rng rng(113);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = steerkit::testing::random_pure_gaussian(3, rng);
    const auto ba = best_cv_product(s, {{1}, 2}, 12);
    const auto bc = best_cv_product(s, {{3}, 2}, 12);
    EXPECT_GE(ba.value * bc.value, 1 - 1e-9) << trial;
    EXPECT_FALSE(ba.verdict && bc.verdict);
  }
}

TEST(Monogamy, QubitSumCriterionProductCanFallBelowOne) {
  // B = site 2 shares a Bell pair with C = site 3; A = site 1 is uncorrelated.
  // C infers B perfectly (value 0) so the product is 0, while A sees a
  // maximally mixed B (value 2). Only the sum form stays above 2.
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = psi(3) = 1 / std::numbers::sqrt2;
  const DensityMatrix rho{qubit::PureState(psi)};
  const Pauli menu[] = {Pauli::X, Pauli::Y, Pauli::Z};
  const auto ba = best_spin_two_obs(rho, {{1}, 2}, menu);
  const auto bc = best_spin_two_obs(rho, {{3}, 2}, menu);
  EXPECT_NEAR(ba.value, 2.0, 1e-12);
  EXPECT_NEAR(bc.value, 0.0, 1e-12);
  const auto m = monogamy_check(ba, bc);
  EXPECT_FALSE(m.satisfied);
  EXPECT_TRUE(m.exclusive);
  EXPECT_GE(m.sum, 2.0 - 1e-12);
}

TEST(Monogamy, QubitSumFormHoldsOnRandomStates) {
  steerkit::testing::Rng rng(127);
  const Pauli menu[] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (int trial = 0; trial < 100; ++trial) {
    const auto rho = steerkit::testing::random_density(3, 1 + static_cast<int>(rng() % 2), rng);
    const auto ba = best_spin_two_obs(rho, {{1}, 2}, menu);
    const auto bc = best_spin_two_obs(rho, {{3}, 2}, menu);
    const auto m = monogamy_check(ba, bc);
    EXPECT_GE(m.sum, 2.0 - 1e-9) << trial;
    EXPECT_TRUE(m.exclusive) << trial;
  }
}

// --- collective and tripartite scans ------------------------------------------------------

TEST(ProperSubsets, OrderAndCount) {
  EXPECT_EQ(proper_subsets({1, 2}), (std::vector<std::vector<int>>{{1}, {2}}));
  EXPECT_EQ(proper_subsets({2, 4, 5}),
            (std::vector<std::vector<int>>{{2}, {4}, {5}, {2, 4}, {2, 5}, {4, 5}}));
  EXPECT_EQ(proper_subsets({1, 2, 3, 4}).size(), 14u);
  EXPECT_TRUE(proper_subsets({7}).empty());
  EXPECT_THROW(proper_subsets({}), std::invalid_argument);
}

TEST(CollectiveScan, QubitGhz) {
  for (int n : {3, 4}) {
    const DensityMatrix g(qubit::ghz(n));
    std::vector<int> group;
    for (int s = 1; s < n; ++s) group.push_back(s);
    const auto r = collective_scan(g, n, group);
    EXPECT_TRUE(r.full_group.verdict) << n;
    EXPECT_EQ(r.subsets.size(), proper_subsets(group).size());
    for (const auto& s : r.subsets) EXPECT_GE(s.value, 1 - kSubsetFloorTolerance) << n;
    EXPECT_TRUE(r.collective) << n;
  }
}

TEST(CollectiveScan, CvGhzAndProductStates) {
  const auto r = collective_scan(cv::cv_ghz(1.0), 1, {2, 3});
  EXPECT_TRUE(r.full_group.verdict);
  for (const auto& s : r.subsets) EXPECT_GE(s.value, 1 - kSubsetFloorTolerance);
  EXPECT_TRUE(r.collective);

  EXPECT_FALSE(collective_scan(cv::vacuum(3), 1, {2, 3}).collective);
  EXPECT_FALSE(collective_scan(DensityMatrix(qubit::basis_state(3, 0)), 3, {1, 2}).collective);
}

TEST(CollectiveScan, BellPairIsNotCollective) {
  // site 2 alone already steers site 3
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = psi(3) = 1 / std::numbers::sqrt2;
  const auto r = collective_scan(DensityMatrix(qubit::PureState(psi)), 3, {1, 2});
  EXPECT_TRUE(r.full_group.verdict);
  EXPECT_FALSE(r.collective);
}

TEST(CollectiveScan, AnyStateChecksBackend) {
  const AnyState q = g3();
  const AnyState c = cv::cv_ghz(1.0);
  CollectiveConfig cfg;
  cfg.backend = Backend::Cv;
  EXPECT_THROW(collective_scan(q, 3, {1, 2}, cfg), std::invalid_argument);
  EXPECT_TRUE(collective_scan(c, 1, {2, 3}, cfg).collective);
  cfg.backend = Backend::Qubit;
  EXPECT_THROW(collective_scan(c, 1, {2, 3}, cfg), std::invalid_argument);
  EXPECT_TRUE(collective_scan(q, 3, {1, 2}, cfg).collective);
}

TEST(TripartiteScan, GhzAndProduct) {
  const auto q = pure_state_tripartite_scan(g3());
  EXPECT_EQ(q.per_site.size(), 3u);
  EXPECT_TRUE(q.genuine_under_purity);
  EXPECT_FALSE(pure_state_tripartite_scan(DensityMatrix(qubit::basis_state(3, 5))).genuine_under_purity);
  EXPECT_TRUE(pure_state_tripartite_scan(cv::cv_ghz(1.0)).genuine_under_purity);
  EXPECT_FALSE(pure_state_tripartite_scan(cv::vacuum(3)).genuine_under_purity);
  EXPECT_FALSE(pure_state_tripartite_scan(g3(), false).pure_asserted);
}

// --- hierarchy sanity ------------------------------------------------------------------

TEST(Hierarchy, SteeringImpliesNegativePartialTranspose) {
  steerkit::testing::Rng rng(131);
  const Pauli menu[] = {Pauli::X, Pauli::Y, Pauli::Z};
  int steered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double q = steerkit::testing::uniform(rng, 0.5, 1.0);
    const Eigen::MatrixXcd mix = q * noisy_ghz(3, 1.0).entries() +
                                 (1 - q) * steerkit::testing::random_density_entries(3, 2, rng);
    const DensityMatrix rho(mix);
    if (!best_spin_two_obs(rho, {{1, 2}, 3}, menu).verdict) continue;
    ++steered;
    const int sites[] = {3};
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(qubit::partial_transpose(rho, sites));
    EXPECT_LT(es.eigenvalues().minCoeff(), 0.0) << trial;
  }
  EXPECT_GT(steered, 0);
}

} // namespace
