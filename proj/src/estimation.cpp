// Copyright 2026 The measkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "measkit/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace measkit {

double relative_error_bound(double p, int n_2q) {
  if (p < 0.0 || p >= 1.0) {
    throw ArgumentError("gate error probability must lie in [0, 1)");
  }
  if (n_2q < 0) {
    throw ArgumentError("gate count must be non-negative");
  }
  return 1.0 - std::pow(1.0 - p, n_2q);
}

double invert_error_bound(double p, double epsilon_target) {
  if (p < 0.0 || p >= 1.0) {
    throw ArgumentError("gate error probability must lie in [0, 1)");
  }
  if (epsilon_target <= 0.0 || epsilon_target >= 1.0) {
    throw ArgumentError("epsilon target must lie in (0, 1)");
  }
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  return std::log1p(-epsilon_target) / std::log1p(-p);
}

namespace {

struct ProductTerm {
  PauliString pauli;
  double sign;
};

/// P_a P_b for commuting members: Hermitian, so the i^g phase must land
/// on a real +-1.
ProductTerm hermitian_product(const PauliString& a, const PauliString& b) {
  const int g = detail::pauli_product_phase_exponent(a, b);
  if (g % 2 != 0) {
    throw NumericalError("product of commuting Paulis came out non-Hermitian");
  }
  PauliString prod(a.num_qubits(), a.x_bits() ^ b.x_bits(),
                   a.z_bits() ^ b.z_bits());
  return ProductTerm{std::move(prod), g == 0 ? 1.0 : -1.0};
}

template <typename Member>
const PauliString& member_pauli(const Member& m) {
  if constexpr (std::is_same_v<Member, SignedPauli>) {
    return m.pauli;
  } else {
    return m;
  }
}

template <typename Member>
double member_sign(const Member& m) {
  if constexpr (std::is_same_v<Member, SignedPauli>) {
    return static_cast<double>(m.sign);
  } else {
    return 1.0;
  }
}

template <typename Member>
double variance_impl(const DensityMatrix& rho, std::span<const double> coeffs,
                     std::span<const Member> members) {
  if (coeffs.size() != members.size()) {
    throw ArgumentError("coefficient and member counts differ");
  }
  const std::size_t m = members.size();
  std::vector<double> means(m);
  for (std::size_t j = 0; j < m; ++j) {
    means[j] = member_sign(members[j]) * expectation(rho, member_pauli(members[j]));
  }
  double var = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      const ProductTerm prod =
          hermitian_product(member_pauli(members[k]), member_pauli(members[j]));
      const double cross = member_sign(members[j]) * member_sign(members[k]) *
                           prod.sign * expectation(rho, prod.pauli);
      var += coeffs[j] * coeffs[k] * (cross - means[j] * means[k]);
    }
  }
  if (var < -1e-9) {
    throw NumericalError("group variance came out negative: " +
                         std::to_string(var));
  }
  return std::max(var, 0.0);
}

}  // namespace

double variance_of_terms(const DensityMatrix& rho,
                         std::span<const double> coeffs,
                         std::span<const PauliString> paulis) {
  return variance_impl(rho, coeffs, paulis);
}

double variance_of_terms(const DensityMatrix& rho,
                         std::span<const double> coeffs,
                         std::span<const SignedPauli> zforms) {
  return variance_impl(rho, coeffs, zforms);
}

double group_variance(const DensityMatrix& rho_tilde,
                      const MeasurementGroup& group) {
  if (!group.measured_forms.empty()) {
    return variance_of_terms(rho_tilde, group.coeffs,
                             std::span<const SignedPauli>(group.measured_forms));
  }
  return variance_of_terms(rho_tilde, group.coeffs,
                           std::span<const PauliString>(group.paulis));
}

namespace {

ShotAllocation proportional_allocation(std::span<const double> variances,
                                       double total) {
  ShotAllocation alloc;
  alloc.total = total;
  alloc.fractional.resize(variances.size(), 0.0);
  alloc.shots.resize(variances.size(), 0);

  double weight_sum = 0.0;
  for (double v : variances) {
    if (v < 0.0) {
      throw ArgumentError("variances must be non-negative");
    }
    weight_sum += std::sqrt(v);
  }
  if (weight_sum == 0.0) {
    alloc.all_zero = true;
    return alloc;
  }
  for (std::size_t i = 0; i < variances.size(); ++i) {
    alloc.fractional[i] = total * std::sqrt(variances[i]) / weight_sum;
  }
  // Largest-remainder rounding preserves the integer total exactly.
  const auto target = static_cast<long long>(std::llround(total));
  long long assigned = 0;
  std::vector<std::pair<double, std::size_t>> remainders;
  for (std::size_t i = 0; i < variances.size(); ++i) {
    const double floor_val = std::floor(alloc.fractional[i]);
    alloc.shots[i] = static_cast<long long>(floor_val);
    assigned += alloc.shots[i];
    remainders.push_back({alloc.fractional[i] - floor_val, i});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < target && k < remainders.size(); ++k) {
    ++alloc.shots[remainders[k].second];
    ++assigned;
  }
  return alloc;
}

}  // namespace

ShotAllocation allocate_shots_budget(std::span<const double> variances,
                                     double budget) {
  if (variances.empty()) {
    throw ArgumentError("allocation needs at least one group");
  }
  if (budget <= 0.0) {
    throw ArgumentError("shot budget must be positive");
  }
  return proportional_allocation(variances, budget);
}

ShotAllocation allocate_shots_target(std::span<const double> variances,
                                     double epsilon) {
  if (variances.empty()) {
    throw ArgumentError("allocation needs at least one group");
  }
  if (epsilon <= 0.0) {
    throw ArgumentError("precision target must be positive");
  }
  double weight_sum = 0.0;
  for (double v : variances) {
    if (v < 0.0) {
      throw ArgumentError("variances must be non-negative");
    }
    weight_sum += std::sqrt(v);
  }
  const double total = (weight_sum * weight_sum) / (epsilon * epsilon);
  if (total == 0.0) {
    ShotAllocation alloc;
    alloc.fractional.resize(variances.size(), 0.0);
    alloc.shots.resize(variances.size(), 0);
    alloc.all_zero = true;
    return alloc;
  }
  return proportional_allocation(variances, total);
}

GroupMeasurement measure_group(const DensityMatrix& rho,
                               const MeasurementGroup& group,
                               const NoiseChannelSpec& noise) {
  if (!group.routed_circuit || group.measured_forms.empty()) {
    throw ArgumentError("group has no synthesized measurement circuit");
  }
  GroupMeasurement out;
  const DensityMatrix rho_tilde =
      apply_circuit(rho, *group.routed_circuit, noise);
  out.noisy.reserve(group.paulis.size());
  out.ideal.reserve(group.paulis.size());
  for (std::size_t j = 0; j < group.paulis.size(); ++j) {
    out.noisy.push_back(z_expectation(rho_tilde, group.measured_forms[j]));
    out.ideal.push_back(expectation(rho, group.paulis[j]));
  }
  out.variance = group_variance(rho_tilde, group);
  const GateStats stats = gate_stats(*group.routed_circuit);
  out.n_2q = stats.n_2q;
  out.depth = stats.depth;
  return out;
}

std::vector<double> grouped_expectations(const DensityMatrix& rho,
                                         const MeasurementGroup& group,
                                         const NoiseChannelSpec& noise) {
  return measure_group(rho, group, noise).noisy;
}

BiasReport bias_report(std::span<const GroupMeasurement> measurements,
                       std::span<const MeasurementGroup> groups) {
  if (measurements.size() != groups.size()) {
    throw ArgumentError("measurement and group counts differ");
  }
  BiasReport report;
  report.per_group.reserve(groups.size());
  for (std::size_t l = 0; l < groups.size(); ++l) {
    double bias = 0.0;
    for (std::size_t j = 0; j < groups[l].coeffs.size(); ++j) {
      bias += groups[l].coeffs[j] *
              (measurements[l].noisy[j] - measurements[l].ideal[j]);
    }
    report.per_group.push_back(bias);
    report.total += bias;
  }
  return report;
}

EstimatorReport run_estimation(std::span<const MeasurementGroup> groups,
                               const DensityMatrix& rho,
                               const NoiseChannelSpec& noise,
                               std::optional<double> shot_budget,
                               std::optional<double> precision,
                               unsigned threads) {
  if (groups.empty()) {
    throw ArgumentError("estimation needs at least one group");
  }
  std::vector<GroupMeasurement> measurements(groups.size());
  if (threads <= 1 || groups.size() == 1) {
    for (std::size_t l = 0; l < groups.size(); ++l) {
      measurements[l] = measure_group(rho, groups[l], noise);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned workers =
        std::min<unsigned>(threads, static_cast<unsigned>(groups.size()));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t l = next.fetch_add(1); l < groups.size();
             l = next.fetch_add(1)) {
          try {
            measurements[l] = measure_group(rho, groups[l], noise);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  EstimatorReport report;
  const BiasReport biases = bias_report(measurements, groups);
  report.group_biases = biases.per_group;
  report.total_bias = biases.total;
  double weight_sum = 0.0;
  for (std::size_t l = 0; l < groups.size(); ++l) {
    report.group_variances.push_back(measurements[l].variance);
    report.group_n_2q.push_back(measurements[l].n_2q);
    report.group_depths.push_back(measurements[l].depth);
    weight_sum += std::sqrt(measurements[l].variance);
    for (std::size_t j = 0; j < groups[l].coeffs.size(); ++j) {
      report.estimator_value += groups[l].coeffs[j] * measurements[l].noisy[j];
      report.ideal_value += groups[l].coeffs[j] * measurements[l].ideal[j];
    }
  }
  report.sample_variance = weight_sum * weight_sum;
  if (shot_budget) {
    report.allocation = allocate_shots_budget(report.group_variances, *shot_budget);
  } else if (precision) {
    report.allocation = allocate_shots_target(report.group_variances, *precision);
  }
  return report;
}

double mse(const EstimatorReport& report, const ShotAllocation& allocation) {
  if (allocation.fractional.size() != report.group_variances.size()) {
    throw ArgumentError("allocation does not match the report");
  }
  double variance_term = 0.0;
  for (std::size_t l = 0; l < report.group_variances.size(); ++l) {
    const double v = report.group_variances[l];
    const double n = allocation.fractional[l];
    if (v > 0.0 && n <= 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    if (v > 0.0) variance_term += v / n;
  }
  return report.total_bias * report.total_bias + variance_term;
}

}  // namespace measkit
