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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "measkit/circuit.hpp"
#include "measkit/device.hpp"
#include "measkit/pauli.hpp"

namespace measkit {

/// Context variables consulted by device-aware kernels: hec needs the
/// device, galic needs the device and a relative-error target; qwc and
/// fc ignore both.
struct GroupingContext {
  std::optional<DeviceModel> device;
  std::optional<double> epsilon_target;
};

/// A grouping function: decides whether a candidate set of Pauli strings
/// may be measured simultaneously. Every kernel accepts only pairwise
/// fully commuting sets, accepts every singleton, and accepts every
/// pairwise qubit-wise commuting set, placing it between qwc and fc in
/// the permissiveness partial order.
class GroupingKernel {
 public:
  virtual ~GroupingKernel() = default;
  virtual bool accepts(std::span<const PauliString> group,
                       const GroupingContext& context) const = 0;
  virtual std::string_view name() const = 0;
};

class QwcKernel final : public GroupingKernel {
 public:
  bool accepts(std::span<const PauliString> group,
               const GroupingContext& context) const override;
  std::string_view name() const override { return "qwc"; }
};

class FcKernel final : public GroupingKernel {
 public:
  bool accepts(std::span<const PauliString> group,
               const GroupingContext& context) const override;
  std::string_view name() const override { return "fc"; }
};

/// Accepts fully commuting sets whose canonical diagonalization emits
/// entangling gates only along coupling-graph edges.
class HecKernel final : public GroupingKernel {
 public:
  bool accepts(std::span<const PauliString> group,
               const GroupingContext& context) const override;
  std::string_view name() const override { return "hec"; }
};

/// Accepts fully commuting sets whose worst-case routed entangling-gate
/// count fits the depolarizing bias budget:
///   N_AC(N_AC-1)/2 * (3(D_max-1)+1) <= ln(1-eps_target) / ln(1-p_2q).
/// Groups with N_AC <= 1 are always accepted; p = 0 accepts everything;
/// disconnected anticommuting qubits reject (fail closed).
class GalicKernel final : public GroupingKernel {
 public:
  bool accepts(std::span<const PauliString> group,
               const GroupingContext& context) const override;
  std::string_view name() const override { return "galic"; }
};

std::unique_ptr<GroupingKernel> make_kernel(std::string_view name);

/// A simultaneously measurable set: mutually commuting strings with
/// their synthesized measurement circuit once the circuit stage has run.
struct MeasurementGroup {
  std::vector<PauliString> paulis;
  std::vector<double> coeffs;
  std::optional<Circuit> circuit;          // unrouted diagonalization
  std::optional<Circuit> routed_circuit;
  std::vector<std::uint32_t> final_permutation;
  /// Conjugated Z-type forms of `paulis` through the routed circuit.
  std::vector<SignedPauli> measured_forms;
  std::optional<long long> assigned_shots;
};

/// Greedy grouping: sort terms by |coeff| descending (stable, preserving
/// input order on ties), then repeatedly open a group and insert every
/// remaining term the kernel accepts alongside it, scanning in sorted
/// order.
std::vector<MeasurementGroup> sorted_insertion(const WeightedObservable& observable,
                                               const GroupingKernel& kernel,
                                               const GroupingContext& context);

/// Fills circuit, routed form, permutation, and measured forms for one
/// group. Routing uses the context device when present.
void synthesize_group(MeasurementGroup& group, const GroupingContext& context);

/// Rejection-samples a pairwise fully commuting set, growing toward
/// target_size with up to 100 attempts per slot.
std::vector<PauliString> sample_commuting_set(std::mt19937_64& rng,
                                              std::uint32_t num_qubits,
                                              std::uint32_t target_size);

struct PartialOrderReport {
  std::uint64_t trials = 0;
  /// Sets accepted by f1 but rejected by f2.
  std::vector<std::vector<PauliString>> violations;
};

/// Samples random commuting sets (widths 2-6, sizes 1-6) and reports
/// every one where f1 accepts but f2 rejects; an empty report certifies
/// the sampled relation f1 <= f2.
PartialOrderReport check_partial_order(const GroupingKernel& f1,
                                       const GroupingKernel& f2,
                                       const GroupingContext& context,
                                       std::uint64_t trials, std::uint64_t seed);

}  // namespace measkit
