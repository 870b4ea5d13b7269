#include "steerkit/qubit.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <type_traits>

namespace steerkit::qubit {

namespace {

void require_on_site(const PauliString& target, int site) {
  const auto supp = target.support();
  if (supp.size() != 1 || supp.front() != site)
    throw std::invalid_argument("target must act on the target site only");
}

void require_within(const PauliString& predictor, const SitePartition& partition) {
  for (int s : predictor.support()) {
    if (std::find(partition.steering_group.begin(), partition.steering_group.end(), s) ==
        partition.steering_group.end())
      throw std::invalid_argument("predictor acts outside the steering group");
  }
}

} // namespace

std::vector<double> joint_distribution(const DensityMatrix& rho, std::span<const int> sites,
                                       std::span<const Pauli> labels) {
  const int n = rho.n_qubits();
  if (sites.size() != labels.size()) throw std::invalid_argument("one label per measured site required");
  if (sites.empty() || static_cast<int>(sites.size()) > n) throw std::invalid_argument("bad measured site count");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 1 || sites[i] > n) throw std::invalid_argument("measured site out of range");
    if (labels[i] == Pauli::I) throw std::invalid_argument("identity is not a measurement setting");
    for (std::size_t j = 0; j < i; ++j)
      if (sites[j] == sites[i]) throw std::invalid_argument("site measured twice");
  }

  // Correlators E_S = <prod_{i in S} sigma_i>, then
  // P(o) = 2^-m sum_S (-1)^{|o & S|} E_S (a Walsh-Hadamard transform).
  const std::size_t m = sites.size();
  const std::size_t outcomes = std::size_t{1} << m;
  std::vector<double> w(outcomes);
  for (std::size_t subset = 0; subset < outcomes; ++subset) {
    std::vector<Pauli> f(static_cast<std::size_t>(n), Pauli::I);
    for (std::size_t i = 0; i < m; ++i)
      if (subset & (std::size_t{1} << i)) f[static_cast<std::size_t>(sites[i] - 1)] = labels[i];
    w[subset] = expectation(rho, PauliString(std::move(f)));
  }
  for (std::size_t h = 1; h < outcomes; h <<= 1) {
    for (std::size_t i = 0; i < outcomes; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = w[j], b = w[j + h];
        w[j] = a + b;
        w[j + h] = a - b;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(outcomes);
  for (double& p : w) p = std::max(0.0, p * scale);
  return w;
}

double optimal_inference_variance(const DensityMatrix& rho, const SitePartition& partition,
                                  const PauliString& target, std::span<const Pauli> settings) {
  partition.validate(rho.n_qubits());
  if (target.n_qubits() != rho.n_qubits()) throw std::invalid_argument("target and state sizes differ");
  require_on_site(target, partition.target_site);
  if (settings.size() != partition.steering_group.size())
    throw std::invalid_argument("one measurement setting per steering site required");

  std::vector<int> sites = partition.steering_group;
  std::vector<Pauli> labels(settings.begin(), settings.end());
  sites.push_back(partition.target_site);
  labels.push_back(target.factor(partition.target_site));
  const auto dist = joint_distribution(rho, sites, labels);

  // Target outcome is the top bit. Var(T|a) = 1 - E[T|a]^2 for T = +-1; the
  // overall sign of T does not change it.
  const std::size_t groups = dist.size() / 2;
  double total = 0.0;
  for (std::size_t a = 0; a < groups; ++a) {
    const double plus = dist[a], minus = dist[a + groups];
    const double pa = plus + minus;
    if (pa <= 0.0) continue;
    const double m = plus - minus;
    total += pa - m * m / pa;
  }
  return std::max(0.0, total);
}

double inference_variance_with_loss(const DensityMatrix& rho, const SitePartition& partition,
                                    const PauliString& target, const PauliString& predictor,
                                    const DetectionModel& model) {
  partition.validate(rho.n_qubits());
  model.validate();
  if (target.n_qubits() != rho.n_qubits() || predictor.n_qubits() != rho.n_qubits())
    throw std::invalid_argument("observable and state sizes differ");
  require_on_site(target, partition.target_site);
  require_within(predictor, partition);

  const double eta = model.efficiency;
  const double t = expectation(rho, target);
  const double p = expectation(rho, predictor);
  const double tp = expectation(rho, target * predictor);

  const double guess = std::visit(
      [t](const auto& policy) {
        if constexpr (std::is_same_v<std::decay_t<decltype(policy)>, MarginalMean>)
          return t;
        else
          return policy.value;
      },
      model.no_click);

  // Click branch: D = T - P. No-click branch: D = T - guess.
  const double click_mean = t - p;
  const double click_sq = 2.0 - 2.0 * tp;
  const double miss_mean = t - guess;
  const double miss_sq = 1.0 - 2.0 * guess * t + guess * guess;

  const double mean = eta * click_mean + (1.0 - eta) * miss_mean;
  const double second = eta * click_sq + (1.0 - eta) * miss_sq;
  return std::max(0.0, second - mean * mean);
}

} // namespace steerkit::qubit
