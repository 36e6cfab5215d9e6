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

#include "measkit/grouping.hpp"

#include <algorithm>
#include <cmath>

#include "measkit/rng.hpp"

namespace measkit {

namespace {

void check_widths(std::span<const PauliString> group) {
  for (std::size_t i = 1; i < group.size(); ++i) {
    if (group[i].num_qubits() != group.front().num_qubits()) {
      throw ArgumentError("group members must share a qubit count");
    }
  }
}

const DeviceModel& require_device(const GroupingContext& context,
                                  std::string_view kernel) {
  if (!context.device) {
    throw ConfigError(std::string(kernel) + " requires a device in context");
  }
  return *context.device;
}

}  // namespace

bool QwcKernel::accepts(std::span<const PauliString> group,
                        const GroupingContext&) const {
  check_widths(group);
  return pairwise_qubitwise_commuting(group);
}

bool FcKernel::accepts(std::span<const PauliString> group,
                       const GroupingContext&) const {
  check_widths(group);
  return pairwise_fully_commuting(group);
}

bool HecKernel::accepts(std::span<const PauliString> group,
                        const GroupingContext& context) const {
  check_widths(group);
  const DeviceModel& device = require_device(context, name());
  if (!group.empty() && group.front().num_qubits() > device.graph.num_qubits()) {
    throw ConfigError("group is wider than the device coupling graph");
  }
  if (!pairwise_fully_commuting(group)) return false;
  if (group.size() <= 1) return true;
  for (auto [a, b] : cz_adjacency(group)) {
    if (!device.graph.has_edge(a, b)) return false;
  }
  return true;
}

bool GalicKernel::accepts(std::span<const PauliString> group,
                          const GroupingContext& context) const {
  check_widths(group);
  const DeviceModel& device = require_device(context, name());
  if (!context.epsilon_target) {
    throw ConfigError("galic requires an epsilon target in context");
  }
  const double eps = *context.epsilon_target;
  if (eps <= 0.0 || eps >= 1.0) {
    throw ConfigError("epsilon target must lie in (0, 1)");
  }
  if (!group.empty() && group.front().num_qubits() > device.graph.num_qubits()) {
    throw ConfigError("group is wider than the device coupling graph");
  }
  if (!pairwise_fully_commuting(group)) return false;
  if (group.size() <= 1) return true;

  const std::vector<std::uint32_t> ac = anticommuting_qubits(group);
  const auto n_ac = static_cast<double>(ac.size());
  if (ac.size() <= 1) return true;  // no entangling gates needed

  const double p = device.noise.p_2q;
  if (p <= 0.0) return true;
  if (p >= 1.0) return false;

  const int d_max = max_pairwise_distance(device.graph, ac);
  if (d_max == CouplingGraph::kInfiniteDistance) return false;  // fail closed

  const double lhs =
      0.5 * n_ac * (n_ac - 1.0) * (3.0 * (static_cast<double>(d_max) - 1.0) + 1.0);
  const double rhs = std::log1p(-eps) / std::log1p(-p);
  return lhs <= rhs;
}

std::unique_ptr<GroupingKernel> make_kernel(std::string_view name) {
  if (name == "qwc") return std::make_unique<QwcKernel>();
  if (name == "fc") return std::make_unique<FcKernel>();
  if (name == "hec") return std::make_unique<HecKernel>();
  if (name == "galic") return std::make_unique<GalicKernel>();
  throw ArgumentError("unknown grouping kernel '" + std::string(name) + "'");
}

std::vector<MeasurementGroup> sorted_insertion(const WeightedObservable& observable,
                                               const GroupingKernel& kernel,
                                               const GroupingContext& context) {
  if (observable.size() == 0) {
    throw ArgumentError("cannot group an empty observable");
  }
  std::vector<std::size_t> order(observable.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(observable.term(a).coeff) > std::abs(observable.term(b).coeff);
  });

  std::vector<bool> added(observable.size(), false);
  std::size_t remaining = observable.size();
  std::vector<MeasurementGroup> groups;
  std::vector<PauliString> candidate;
  while (remaining > 0) {
    MeasurementGroup group;
    candidate.clear();
    for (std::size_t idx : order) {
      if (added[idx]) continue;
      const Term& term = observable.term(idx);
      candidate.push_back(term.pauli);
      if (kernel.accepts(candidate, context)) {
        group.paulis.push_back(term.pauli);
        group.coeffs.push_back(term.coeff);
        added[idx] = true;
        --remaining;
      } else {
        candidate.pop_back();
      }
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

void synthesize_group(MeasurementGroup& group, const GroupingContext& context) {
  group.circuit = diagonalize(group.paulis);
  if (context.device) {
    RoutedCircuit routed = route(*group.circuit, context.device->graph);
    group.routed_circuit = std::move(routed.circuit);
    group.final_permutation = std::move(routed.final_permutation);
  } else {
    group.routed_circuit = group.circuit;
    group.final_permutation.resize(group.circuit->num_qubits());
    for (std::uint32_t q = 0; q < group.circuit->num_qubits(); ++q) {
      group.final_permutation[q] = q;
    }
  }
  group.measured_forms.clear();
  group.measured_forms.reserve(group.paulis.size());
  for (const PauliString& p : group.paulis) {
    SignedPauli conj = conjugate(p, *group.routed_circuit);
    if (!conj.is_z_type()) {
      throw NumericalError("measurement circuit failed to diagonalize a member");
    }
    group.measured_forms.push_back(std::move(conj));
  }
}

std::vector<PauliString> sample_commuting_set(std::mt19937_64& rng,
                                              std::uint32_t num_qubits,
                                              std::uint32_t target_size) {
  std::vector<PauliString> set;
  for (std::uint32_t slot = 0; slot < target_size; ++slot) {
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      const std::uint64_t mask =
          num_qubits >= 64 ? ~std::uint64_t{0}
                           : ((std::uint64_t{1} << num_qubits) - 1);
      PauliString p(num_qubits, rng() & mask, rng() & mask);
      placed = std::all_of(set.begin(), set.end(), [&](const PauliString& q) {
        return fully_commutes(p, q);
      });
      if (placed) set.push_back(std::move(p));
    }
    if (!placed) break;
  }
  if (set.empty()) {
    set.push_back(PauliString::identity(num_qubits));
  }
  return set;
}

PartialOrderReport check_partial_order(const GroupingKernel& f1,
                                       const GroupingKernel& f2,
                                       const GroupingContext& context,
                                       std::uint64_t trials, std::uint64_t seed) {
  auto rng = make_engine(substream(seed, "partial-order"));
  PartialOrderReport report;
  report.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto width = static_cast<std::uint32_t>(2 + uniform_below(rng, 5));
    const auto size = static_cast<std::uint32_t>(1 + uniform_below(rng, 6));
    std::vector<PauliString> set = sample_commuting_set(rng, width, size);
    if (f1.accepts(set, context) && !f2.accepts(set, context)) {
      report.violations.push_back(std::move(set));
    }
  }
  return report;
}

}  // namespace measkit
