#include "steerkit/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <set>
#include <string>
#include <thread>

#include "steerkit/rng.hpp"

namespace steerkit {

using qubit::DensityMatrix;

namespace {

std::vector<int> others(int n, int target) {
  std::vector<int> g;
  for (int s = 1; s <= n; ++s)
    if (s != target) g.push_back(s);
  return g;
}

double lookup(const std::map<std::string, double>& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

int as_count(double v, const char* what) {
  if (!std::isfinite(v) || v != std::floor(v)) throw std::invalid_argument(std::string(what) + " must be an integer");
  return static_cast<int>(v);
}

qubit::NoClickPolicy make_policy(const std::string& name, double guess) {
  if (name == "marginal-mean") return qubit::MarginalMean{};
  if (name == "constant-guess") return qubit::ConstantGuess{guess};
  throw std::invalid_argument("unknown no-click policy: " + name);
}

const std::set<std::string>& parameters_of(const std::string& scenario) {
  static const std::set<std::string> ghz{"n", "noise_p", "eta", "guess", "target"};
  static const std::set<std::string> cvghz{"r", "target"};
  static const std::set<std::string> eave{"r", "eta"};
  if (scenario == "ghz") return ghz;
  if (scenario == "cv-ghz") return cvghz;
  if (scenario == "eavesdrop") return eave;
  throw std::invalid_argument("unknown scenario: " + scenario);
}

QubitGhzParams qubit_params(const SweepConfig& cfg, const std::map<std::string, double>& values) {
  QubitGhzParams p;
  p.n = as_count(lookup(values, "n", 3.0), "n");
  p.noise_p = lookup(values, "noise_p", 1.0);
  p.model.efficiency = lookup(values, "eta", 1.0);
  p.model.no_click = make_policy(cfg.policy, lookup(values, "guess", 1.0));
  p.criterion = cfg.criterion;
  p.target = as_count(lookup(values, "target", 0.0), "target");
  return p;
}

CvGhzParams cv_params(const SweepConfig& cfg, const std::map<std::string, double>& values) {
  CvGhzParams p;
  p.r = lookup(values, "r", 0.0);
  p.criterion = cfg.criterion;
  p.target = as_count(lookup(values, "target", 1.0), "target");
  return p;
}

PointResult evaluate_point(const SweepConfig& cfg, double value, std::size_t index) {
  std::map<std::string, double> values = cfg.fixed;
  values[cfg.parameter] = value;
  const std::uint64_t seed = CounterRng::derive(cfg.seed, index);

  if (cfg.scenario == "ghz") {
    const QubitGhzParams p = qubit_params(cfg, values);
    if (cfg.shots > 0) {
      const int target = p.target == 0 ? p.n : p.target;
      return simulate_shots(noisy_ghz(p.n, p.noise_p), ShotConfig{CriterionId::SpinSum2Obs, target}, cfg.shots, seed);
    }
    return run_qubit_ghz(p);
  }
  if (cfg.scenario == "cv-ghz") {
    const CvGhzParams p = cv_params(cfg, values);
    if (cfg.shots > 0)
      return simulate_shots(cv::cv_ghz(p.r), ShotConfig{CriterionId::CvFixedCombo, p.target}, cfg.shots, seed);
    return run_cv_ghz(p);
  }
  return eavesdrop_point(lookup(values, "r", 0.0), lookup(values, "eta", 1.0));
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw std::invalid_argument("grid values must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
  }
}

double sample_variance_se(const std::vector<double>& d, double& variance) {
  const auto n = static_cast<double>(d.size());
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : d) {
    const double c = (v - mean) * (v - mean);
    m2 += c;
    m4 += c * c;
  }
  variance = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  const double var_of_var = (m4 - (n - 3.0) / (n - 1.0) * m2 * m2) / n;
  return std::sqrt(std::max(0.0, var_of_var));
}

} // namespace

DensityMatrix noisy_ghz(int n, double noise_p) {
  return qubit::depolarize_global(DensityMatrix(qubit::ghz(n)), noise_p);
}

PointResult run_qubit_ghz(const QubitGhzParams& params) {
  const DensityMatrix rho = noisy_ghz(params.n, params.noise_p);
  const int target = params.target == 0 ? params.n : params.target;
  if (params.criterion == "two-obs") return ghz_two_obs(rho, target, params.model);
  if (params.criterion == "three-obs") return ghz_three_obs(rho, target, params.model);
  if (params.criterion == "result4") return ghz_result4(rho, params.model);
  throw std::invalid_argument("unknown qubit criterion: " + params.criterion);
}

PointResult run_cv_ghz(const CvGhzParams& params) {
  const cv::GaussianState state = cv::cv_ghz(params.r);
  if (params.target < 1 || params.target > 3) throw std::invalid_argument("target mode must be 1, 2 or 3");
  const auto rest = others(3, params.target);
  if (params.criterion == "eq2")
    return cv::steering_product_cv(state, params.target, cv::HomodynePlan::all_x(rest), cv::HomodynePlan::all_p(rest));
  if (params.criterion == "eq6") return cv::s_j_fixed_combo(state, params.target, rest[0], rest[1]);
  if (params.criterion == "result4") return cv_result4(state);
  throw std::invalid_argument("unknown cv criterion: " + params.criterion);
}

void SweepConfig::validate() const {
  check_grid(grid);
  const auto& allowed = parameters_of(scenario);
  const Backend expected = scenario == "ghz" ? Backend::Qubit : Backend::Cv;
  if (backend != expected) throw std::invalid_argument("scenario " + scenario + " needs the other backend");
  if (!allowed.contains(parameter)) throw std::invalid_argument("scenario " + scenario + " has no parameter " + parameter);
  for (const auto& [k, v] : fixed) {
    if (!allowed.contains(k)) throw std::invalid_argument("scenario " + scenario + " has no parameter " + k);
    if (!std::isfinite(v)) throw std::invalid_argument("parameter " + k + " must be finite");
  }
  if (scenario == "ghz") {
    static const std::set<std::string> ok{"two-obs", "three-obs", "result4"};
    if (!ok.contains(criterion)) throw std::invalid_argument("unknown qubit criterion: " + criterion);
    make_policy(policy, 0.0);
    if (shots > 0 && criterion != "two-obs") throw std::invalid_argument("shot emulation supports two-obs only");
  } else if (scenario == "cv-ghz") {
    static const std::set<std::string> ok{"eq2", "eq6", "result4"};
    if (!ok.contains(criterion)) throw std::invalid_argument("unknown cv criterion: " + criterion);
    if (shots > 0 && criterion != "eq6") throw std::invalid_argument("shot emulation supports eq6 only");
  } else if (shots > 0) {
    throw std::invalid_argument("shot emulation is not available for the eavesdrop scenario");
  }
  if (shots == 1) throw std::invalid_argument("shot emulation needs at least two shots");
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config, unsigned threads) {
  config.validate();
  const std::size_t points = config.grid.size();
  std::vector<SweepRecord> out(points);
  std::vector<std::exception_ptr> errors(points);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      try {
        out[i] = SweepRecord{i, config.parameter, config.grid[i], evaluate_point(config, config.grid[i], i)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> parse_grid(std::string_view spec) {
  double parts[3];
  std::size_t field = 0;
  while (field < 3) {
    const auto colon = spec.find(':');
    const std::string_view token = field < 2 ? spec.substr(0, colon) : spec;
    if (field < 2 && colon == std::string_view::npos) throw std::invalid_argument("grid must be start:stop:step");
    const auto res = std::from_chars(token.data(), token.data() + token.size(), parts[field]);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
      throw std::invalid_argument("bad number in grid: " + std::string(token));
    if (field < 2) spec.remove_prefix(colon + 1);
    ++field;
  }
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(stop >= start)) throw std::invalid_argument("grid must increase (stop < start)");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = std::min(stop, start + static_cast<double>(i) * step);
  return grid;
}

SecretSharingReport secret_sharing_demo(Backend backend, int n, double r) {
  if (n != 3) throw std::invalid_argument("secret sharing demo supports n = 3 only");
  SecretSharingReport rep;
  rep.backend = backend;
  rep.n = n;
  rep.r = r;
  const AnyState state = backend == Backend::Qubit ? AnyState{DensityMatrix(qubit::ghz(3))} : AnyState{cv::cv_ghz(r)};
  CollectiveConfig cfg;
  cfg.backend = backend;

  rep.all_collective = true;
  rep.min_subset_value = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= n; ++t) {
    auto scan = collective_scan(state, t, others(n, t), cfg);
    rep.all_collective = rep.all_collective && scan.collective;
    for (const auto& s : scan.subsets) rep.min_subset_value = std::min(rep.min_subset_value, s.value);
    // For three parties the proper subsets are the two single collaborators.
    const SteeringValue& a = scan.subsets.at(0);
    const SteeringValue& c = scan.subsets.at(1);
    const MonogamyResult m = monogamy_check(a, c);
    rep.monogamy.push_back(MonogamyRecord{a.criterion, t, a.partition.steering_group, c.partition.steering_group,
                                          a.value, c.value, m.product, m.satisfied, m.exclusive});
    rep.per_target.push_back(std::move(scan));
  }
  return rep;
}

EavesdropRecord eavesdrop_point(double r, double eta) {
  const cv::GaussianState s = cv::eavesdrop_scenario(r, eta);
  using cv::HomodynePlan;
  EavesdropRecord rec;
  rec.r = r;
  rec.eta = eta;
  rec.a_prime = cv::steering_product_cv(s, 1, HomodynePlan::all_x({2, 3}), HomodynePlan::all_p({2, 3}));
  rec.eavesdropper = cv::steering_product_cv(s, 1, HomodynePlan::all_x({4, 5}), HomodynePlan::all_p({4, 5}));
  const MonogamyResult m = monogamy_check(rec.a_prime, rec.eavesdropper);
  rec.monogamy_product = m.product;
  rec.monogamy_satisfied = m.satisfied;
  return rec;
}

EavesdropSweep eavesdrop_sweep(double r, const std::vector<double>& eta_grid) {
  check_grid(eta_grid);
  EavesdropSweep sweep;
  for (double eta : eta_grid) sweep.records.push_back(eavesdrop_point(r, eta));
  sweep.monotone = true;
  for (std::size_t i = 1; i < sweep.records.size(); ++i)
    sweep.monotone = sweep.monotone && sweep.records[i - 1].a_prime.value >= sweep.records[i].a_prime.value - 1e-12;
  return sweep;
}

ThresholdResult find_threshold(std::string parameter, double low, double high,
                               const std::function<bool(double)>& verdict, double tolerance) {
  if (!(low < high)) throw std::invalid_argument("threshold bracket must satisfy low < high");
  if (!(tolerance > 0.0)) throw std::invalid_argument("threshold tolerance must be positive");
  const bool at_low = verdict(low);
  if (at_low == verdict(high))
    throw NoThresholdError("verdict does not change across [" + std::to_string(low) + ", " + std::to_string(high) + "]");
  ThresholdResult res;
  res.parameter = std::move(parameter);
  while (high - low > tolerance) {
    const double mid = 0.5 * (low + high);
    (verdict(mid) == at_low ? low : high) = mid;
    ++res.iterations;
  }
  res.low = low;
  res.high = high;
  res.critical = 0.5 * (low + high);
  return res;
}

std::vector<std::string> threshold_scenario_names() {
  return {"three-obs-eta", "two-obs-eta", "cv-eq6-r", "cv-result4-r"};
}

ThresholdResult threshold_scenario(const std::string& name, const qubit::NoClickPolicy& policy, double tolerance) {
  ThresholdResult res;
  if (name == "three-obs-eta" || name == "two-obs-eta") {
    const DensityMatrix rho(qubit::ghz(3));
    const bool three = name == "three-obs-eta";
    res = find_threshold("eta", 0.0, 1.0, [&](double eta) {
      const qubit::DetectionModel model{eta, policy};
      return (three ? ghz_three_obs(rho, 3, model) : ghz_two_obs(rho, 3, model)).verdict;
    }, tolerance);
    res.criterion = three ? CriterionId::SpinSum3Obs : CriterionId::SpinSum2Obs;
  } else if (name == "cv-eq6-r") {
    res = find_threshold("r", 0.0, 1.0, [](double r) { return cv::s_j_fixed_combo(cv::cv_ghz(r), 1, 2, 3).verdict; },
                         tolerance);
    res.criterion = CriterionId::CvFixedCombo;
  } else if (name == "cv-result4-r") {
    res = find_threshold("r", 0.0, 1.0, [](double r) { return cv_result4(cv::cv_ghz(r)).genuine; }, tolerance);
    res.criterion = CriterionId::CvFixedCombo;
  } else {
    throw std::invalid_argument("unknown threshold scenario: " + name);
  }
  res.scenario = name;
  res.bound = criterion_bound(res.criterion);
  return res;
}

ShotEstimate simulate_shots(const AnyState& state, const ShotConfig& config, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 2) throw std::invalid_argument("shot emulation needs at least two shots");
  CounterRng rng(seed);
  ShotEstimate est;
  est.criterion = config.criterion;
  est.bound = criterion_bound(config.criterion);
  est.shots = shots;
  est.seed = seed;
  std::vector<double> samples(shots);

  if (const auto* rho = std::get_if<DensityMatrix>(&state)) {
    if (config.criterion != CriterionId::SpinSum2Obs)
      throw std::invalid_argument("qubit shot emulation supports the two-observable sum");
    const int n = rho->n_qubits();
    const int target = config.target == 0 ? n : config.target;
    est.partition = Partition{others(n, target), target};
    est.partition.validate(n);
    double total = 0.0, se2 = 0.0;
    for (auto comp : {qubit::SpinComponent::X, qubit::SpinComponent::Y}) {
      const auto t_obs = qubit::PauliString::single(n, target, qubit::to_pauli(comp));
      const auto p_obs = qubit::ghz_predictor_for_target(n, target, comp);
      const double t = qubit::expectation(*rho, t_obs);
      const double p = qubit::expectation(*rho, p_obs);
      const double tp = qubit::expectation(*rho, t_obs * p_obs);
      // Outcomes (t, p) in {(+,+), (+,-), (-,+), (-,-)}.
      const double prob[4] = {std::max(0.0, (1 + t + p + tp) / 4), std::max(0.0, (1 + t - p - tp) / 4),
                              std::max(0.0, (1 - t + p - tp) / 4), std::max(0.0, (1 - t - p + tp) / 4)};
      const double diff[4] = {0.0, 2.0, -2.0, 0.0};
      const double norm = prob[0] + prob[1] + prob[2] + prob[3];
      for (auto& s : samples) {
        double u = rng.uniform() * norm;
        int k = 0;
        while (k < 3 && u >= prob[k]) u -= prob[k++];
        s = diff[k];
      }
      double var = 0.0;
      const double se = sample_variance_se(samples, var);
      total += var;
      se2 += se * se;
    }
    est.estimate = total;
    est.standard_error = std::sqrt(se2);
    return est;
  }

  const auto& g = std::get<cv::GaussianState>(state);
  if (config.criterion != CriterionId::CvFixedCombo)
    throw std::invalid_argument("Gaussian shot emulation supports the fixed-combination product");
  if (g.n_modes() != 3) throw std::invalid_argument("fixed-combination product needs three modes");
  const int j = config.target == 0 ? 1 : config.target;
  const auto rest = others(3, j);
  est.partition = Partition{rest, j};
  est.partition.validate(3);
  using Q = cv::QuadratureCombo;
  const Q combos[2] = {Q::x(3, j) - Q::x(3, rest[0]), Q::p(3, j) + Q::p(3, rest[0]) + Q::p(3, rest[1])};
  double var[2], se[2];
  for (int c = 0; c < 2; ++c) {
    const double mu = combos[c].coefficients().dot(g.mean());
    const double sd = std::sqrt(cv::combo_variance(g, combos[c]));
    for (auto& s : samples) s = mu + sd * rng.normal();
    se[c] = sample_variance_se(samples, var[c]);
  }
  est.estimate = std::sqrt(var[0] * var[1]);
  // delta method for sqrt(vx * vp)
  const double dx = var[0] > 0 ? 0.5 * std::sqrt(var[1] / var[0]) : 0.0;
  const double dp = var[1] > 0 ? 0.5 * std::sqrt(var[0] / var[1]) : 0.0;
  est.standard_error = std::hypot(dx * se[0], dp * se[1]);
  return est;
}

} // namespace steerkit
