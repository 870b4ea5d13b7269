#include "steerkit/selftest.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <numbers>

#include "steerkit/scenarios.hpp"

namespace steerkit {

namespace {

using qubit::DensityMatrix;
using qubit::DetectionModel;
using qubit::Pauli;
using qubit::PauliString;

class Suite {
public:
  std::vector<SelftestCheck> checks;

  void value(std::string name, double expected, const std::function<double()>& actual, double tol = 1e-10) {
    SelftestCheck c{std::move(name), expected, std::nan(""), tol, false};
    try {
      c.actual = actual();
      c.passed = std::abs(c.actual - expected) <= tol;
    } catch (const std::exception&) {
      c.passed = false;
    }
    checks.push_back(std::move(c));
  }

  void flag(std::string name, bool expected, const std::function<bool()>& actual) {
    value(std::move(name), expected ? 1.0 : 0.0, [&] { return actual() ? 1.0 : 0.0; }, 0.0);
  }

  void throws(std::string name, const std::function<void()>& f) {
    value(std::move(name), 1.0, [&] {
      try {
        f();
      } catch (const std::invalid_argument&) {
        return 1.0;
      } catch (const NoThresholdError&) {
        return 1.0;
      }
      return 0.0;
    }, 0.0);
  }
};

void qubit_checks(Suite& s) {
  const double h = 1.0 / std::numbers::sqrt2;
  const DensityMatrix g3(qubit::ghz(3));
  s.value("ghz(3) amplitude |000>", h, [] { return qubit::ghz(3).amplitudes()(0).real(); });
  s.value("ghz(3) amplitude |111>", -h, [] { return qubit::ghz(3).amplitudes()(7).real(); });
  s.value("ghz(3) norm", 1.0, [] { return qubit::ghz(3).amplitudes().norm(); });
  s.throws("ghz(1) rejected", [] { qubit::ghz(1); });
  s.value("<XYY> on ghz(3)", 1.0, [&] { return qubit::expectation(g3, PauliString::parse("XYY")); });
  s.value("<ZII> on ghz(3)", 0.0, [&] { return qubit::expectation(g3, PauliString::parse("ZII")); });
  s.value("<III> on ghz(3)", 1.0, [&] { return qubit::expectation(g3, PauliString::parse("III")); });
  s.value("ghz_predictor(3,x) sign", 1.0, [] { return qubit::ghz_predictor(3, qubit::SpinComponent::X).sign(); });
  s.value("Var(X3 - Y1Y2) on ghz(3)", 0.0,
          [&] { return qubit::variance_of_difference(g3, PauliString::parse("IIX"), PauliString::parse("YYI")); });
  s.value("Var(X3 - Y1Y2) at p=0.5", 1.0, [] {
    return qubit::variance_of_difference(noisy_ghz(3, 0.5), PauliString::parse("IIX"), PauliString::parse("YYI"));
  });
  s.value("<XYY> after depolarizing p=0.5", 0.5,
          [] { return qubit::expectation(noisy_ghz(3, 0.5), PauliString::parse("XYY")); });
  const Partition a12{{1, 2}, 3};
  const Pauli yy[] = {Pauli::Y, Pauli::Y};
  const Pauli y[] = {Pauli::Y};
  s.value("optimal inference A={1,2}", 0.0,
          [&] { return qubit::optimal_inference_variance(g3, a12, PauliString::parse("IIX"), yy); });
  s.value("optimal inference A={2}", 1.0, [&] {
    return qubit::optimal_inference_variance(g3, Partition{{2}, 3}, PauliString::parse("IIX"), y);
  });
  s.value("optimal inference A={1,2} at p=0.5", 0.75, [&] {
    return qubit::optimal_inference_variance(noisy_ghz(3, 0.5), a12, PauliString::parse("IIX"), yy);
  });
  s.value("loss eta=0.5 marginal mean", 0.5, [&] {
    return qubit::inference_variance_with_loss(g3, a12, PauliString::parse("IIX"), PauliString::parse("YYI"),
                                               DetectionModel{0.5, qubit::MarginalMean{}});
  });
  s.value("loss eta=0.5 constant guess +1", 0.75, [&] {
    return qubit::inference_variance_with_loss(g3, a12, PauliString::parse("IIX"), PauliString::parse("YYI"),
                                               DetectionModel{0.5, qubit::ConstantGuess{1.0}});
  });
}

void cv_checks(Suite& s) {
  using cv::QuadratureCombo;
  const double e1 = std::exp(-1.0);
  s.value("squeeze r=0.5 Var(x)", e1, [] { return cv::squeeze(cv::vacuum(1), 1, 0.5, 0.0).var_x(1); });
  s.value("squeeze r=0.5 Var(p)", std::exp(1.0), [] { return cv::squeeze(cv::vacuum(1), 1, 0.5, 0.0).var_p(1); });
  s.value("squeeze r=0.5 angle pi/2 Var(p)", e1,
          [] { return cv::squeeze(cv::vacuum(1), 1, 0.5, std::numbers::pi / 2).var_p(1); });
  s.value("x-squeezed + vacuum through 50:50", (std::exp(-1.0) + 1) / 2, [] {
    return cv::beamsplitter(cv::squeeze(cv::vacuum(2), 1, 0.5, 0.0), 1, 2, 0.5).var_x(1);
  });
  s.value("loss 0.5 on x-squeezed r=1", (std::exp(-2.0) + 1) / 2,
          [] { return cv::loss_channel(cv::squeeze(cv::vacuum(1), 1, 1.0, 0.0), 1, 0.5).var_x(1); });
  const cv::GaussianState g = cv::cv_ghz(0.5);
  s.value("cv_ghz(0.5) Var(x1-x2)", 2 * e1,
          [&] { return cv::combo_variance(g, QuadratureCombo::x(3, 1) - QuadratureCombo::x(3, 2)); });
  s.value("cv_ghz(0.5) Var(p1+p2+p3)", 3 * e1, [&] {
    return cv::combo_variance(g, QuadratureCombo::p(3, 1) + QuadratureCombo::p(3, 2) + QuadratureCombo::p(3, 3));
  });
  for (double r : {0.3, 1.0}) {
    s.value("two-mode squeezed r=" + std::to_string(r) + " conditional variance", 1 / std::cosh(2 * r), [r] {
      return cv::optimal_conditional_variance(cv::two_mode_squeezed(r), QuadratureCombo::x(2, 1),
                                              cv::HomodynePlan::all_x({2}));
    });
  }
  s.value("S_1 on vacuum", std::sqrt(6.0), [] { return cv::s_j_fixed_combo(cv::vacuum(3), 1, 2, 3).value; });
  s.value("S_2 on cv_ghz(1)", std::sqrt(6.0) * std::exp(-2.0),
          [] { return cv::s_j_fixed_combo(cv::cv_ghz(1.0), 2, 1, 3).value; });
  s.value("S_1 at r = ln6/4", 1.0, [] { return cv::s_j_fixed_combo(cv::cv_ghz(std::log(6.0) / 4), 1, 2, 3).value; });
  s.value("product on vacuum", 1.0, [] {
    return cv::steering_product_cv(cv::vacuum(3), 1, cv::HomodynePlan::all_x({2, 3}), cv::HomodynePlan::all_p({2, 3}))
        .value;
  });
  s.flag("cv_ghz(1) steers mode 1", true, [] {
    return cv::steering_product_cv(cv::cv_ghz(1.0), 1, cv::HomodynePlan::all_x({2, 3}),
                                   cv::HomodynePlan::all_p({2, 3}))
        .verdict;
  });
}

void criteria_checks(Suite& s) {
  const DensityMatrix g3(qubit::ghz(3));
  for (int n = 3; n <= 8; ++n)
    s.value("two-obs on ghz(" + std::to_string(n) + ")", 0.0,
            [n] { return ghz_two_obs(DensityMatrix(qubit::ghz(n)), n).value; }, 1e-12);
  s.value("two-obs at p=0.5", 2.0, [] { return ghz_two_obs(noisy_ghz(3, 0.5), 3).value; });
  s.value("two-obs on maximally mixed", 4.0, [] { return ghz_two_obs(DensityMatrix::maximally_mixed(3), 3).value; });
  s.value("three-obs on ghz(3)", 0.0, [&] { return ghz_three_obs(g3, 3).value; });
  s.value("three-obs eta=0.5", 1.5, [&] { return ghz_three_obs(g3, 3, {0.5, qubit::MarginalMean{}}).value; });
  s.flag("three-obs eta=1/3 is not a violation", false,
         [&] { return ghz_three_obs(g3, 3, {1.0 / 3.0, qubit::MarginalMean{}}).verdict; });
  s.flag("three-obs eta=0.2 is not a violation", false,
         [&] { return ghz_three_obs(g3, 3, {0.2, qubit::MarginalMean{}}).verdict; });
  s.value("result4 sum on ghz(3)", 0.0, [&] { return ghz_result4(g3).sum; });
  s.value("result4 sum at p=0.95", 0.6, [] { return ghz_result4(noisy_ghz(3, 0.95)).sum; });
  s.value("cv result4 sum at r=1", 3 * std::sqrt(6.0) * std::exp(-2.0), [] { return cv_result4(cv::cv_ghz(1.0)).sum; });
  s.flag("cv result4 genuine at r=1", true, [] { return cv_result4(cv::cv_ghz(1.0)).genuine; });
  s.value("monogamy product (0.5, 2.0)", 1.0, [] {
    return monogamy_check(SteeringValue::make(CriterionId::CvProduct, {{2}, 1}, 0.5),
                          SteeringValue::make(CriterionId::CvProduct, {{3}, 1}, 2.0))
        .product;
  });
  s.throws("monogamy rejects overlapping groups", [] {
    monogamy_check(SteeringValue::make(CriterionId::CvProduct, {{2, 3}, 1}, 0.5),
                   SteeringValue::make(CriterionId::CvProduct, {{3}, 1}, 2.0));
  });
  s.flag("collective scan ghz(3) target 3", true, [&] { return collective_scan(g3, 3, {1, 2}).collective; });
  s.flag("collective scan cv_ghz(1) target 1", true,
         [] { return collective_scan(cv::cv_ghz(1.0), 1, {2, 3}).collective; });
  s.flag("tripartite scan ghz(3)", true, [&] { return pure_state_tripartite_scan(g3).genuine_under_purity; });
  s.flag("tripartite scan |000>", false,
         [] { return pure_state_tripartite_scan(DensityMatrix(qubit::basis_state(3, 0))).genuine_under_purity; });
  s.flag("tripartite scan cv_ghz(1)", true,
         [] { return pure_state_tripartite_scan(cv::cv_ghz(1.0)).genuine_under_purity; });
}

void scenario_checks(Suite& s) {
  s.flag("secret sharing qubit", true, [] { return secret_sharing_demo(Backend::Qubit, 3).all_collective; });
  s.flag("secret sharing cv r=1", true, [] { return secret_sharing_demo(Backend::Cv, 3, 1.0).all_collective; });
  s.flag("secret sharing cv r=0", false, [] { return secret_sharing_demo(Backend::Cv, 3, 0.0).all_collective; });
  s.flag("eavesdrop eta=1 r=1.5 steers", true, [] { return eavesdrop_point(1.5, 1.0).a_prime.verdict; });
  s.value("eavesdrop eta=0.5 symmetry", 0.0, [] {
    const auto rec = eavesdrop_point(1.5, 0.5);
    return rec.a_prime.value - rec.eavesdropper.value;
  }, 1e-9);
  s.value("eavesdrop eta=0 is unconditioned", [] {
    const auto g = cv::cv_ghz(1.5);
    return std::sqrt(g.var_x(1) * g.var_p(1));
  }(), [] { return eavesdrop_point(1.5, 0.0).a_prime.value; });
  s.value("threshold three-obs-eta", 1.0 / 3.0, [] { return threshold_scenario("three-obs-eta").critical; }, 1e-4);
  s.value("threshold two-obs-eta", 0.5, [] { return threshold_scenario("two-obs-eta").critical; }, 1e-4);
  s.value("threshold cv-eq6-r", std::log(6.0) / 4, [] { return threshold_scenario("cv-eq6-r").critical; }, 1e-4);
  s.value("threshold cv-result4-r", std::log(3 * std::sqrt(6.0)) / 2,
          [] { return threshold_scenario("cv-result4-r").critical; }, 1e-4);
  s.value("shots p=0.5 within 5 SE", 1.0, [] {
    const auto est = simulate_shots(noisy_ghz(3, 0.5), {}, 100000, 7);
    return std::abs(est.estimate - 2.0) <= 5 * est.standard_error ? 1.0 : 0.0;
  }, 0.0);
  s.throws("shots < 2 rejected", [] { simulate_shots(noisy_ghz(3, 1.0), {}, 1, 0); });
  s.throws("decreasing grid rejected", [] { parse_grid("1:0:-0.1"); });
}

} // namespace

std::vector<SelftestCheck> run_selftest() {
  Suite s;
  qubit_checks(s);
  cv_checks(s);
  criteria_checks(s);
  scenario_checks(s);
  return std::move(s.checks);
}

} // namespace steerkit
