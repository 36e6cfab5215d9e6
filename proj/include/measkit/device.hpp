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
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "measkit/errors.hpp"

namespace measkit {

/// Undirected simple coupling graph with cached all-pairs hop counts.
///
/// Edges are normalized to (min, max) and deduplicated. Distances are
/// computed by BFS from every vertex on first use and shared across
/// copies; disconnected pairs carry kInfiniteDistance.
class CouplingGraph {
 public:
  static constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

  CouplingGraph(std::uint32_t num_qubits,
                std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

  std::uint32_t num_qubits() const { return num_qubits_; }
  std::span<const std::pair<std::uint32_t, std::uint32_t>> edges() const {
    return edges_;
  }
  const std::vector<std::vector<std::uint32_t>>& adjacency() const {
    return adjacency_;
  }
  bool has_edge(std::uint32_t a, std::uint32_t b) const;

  /// Hop count between a and b; kInfiniteDistance when disconnected.
  int distance(std::uint32_t a, std::uint32_t b) const;

  /// Row-major num_qubits x num_qubits hop-count matrix.
  const std::vector<int>& distances() const;

 private:
  struct DistanceCache {
    std::once_flag once;
    std::vector<int> dist;
  };

  void ensure_distances() const;

  std::uint32_t num_qubits_ = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::shared_ptr<DistanceCache> cache_;
};

/// Max hop count over pairs drawn from `qubits`; 0 when fewer than two
/// qubits are given; kInfiniteDistance if any pair is disconnected.
int max_pairwise_distance(const CouplingGraph& graph,
                          std::span<const std::uint32_t> qubits);

enum class TopologyKind { kRing, kComplete, kHeavyHex, kRandomRegular };

TopologyKind topology_from_name(std::string_view name);
std::string_view topology_name(TopologyKind kind);

/// Deterministic topology construction. `degree` and `seed` are only
/// consulted for random-regular graphs (pairing model, up to 1000
/// retries per seed). Heavy-hex builds the standard rows-of-degree-<=3
/// brick pattern and takes the induced subgraph on the first
/// `num_qubits` vertices in row-major order.
CouplingGraph generate_topology(TopologyKind kind, std::uint32_t num_qubits,
                                std::uint32_t degree = 0, std::uint64_t seed = 0);

struct NoiseParameters {
  double p_1q = 0.0;   // depolarizing probability per single-qubit gate
  double p_2q = 0.0;   // depolarizing probability per two-qubit gate
  double t1_us = 1.0;  // longitudinal relaxation time
  double t2_us = 1.0;  // transversal relaxation time, <= 2 * t1
  double t_1q_us = 0.0;
  double t_2q_us = 0.0;

  void validate() const;
};

/// Noise-reduction scaling: gate error probabilities divide by r; T1/T2
/// multiply by ln(r) for r > 1 and stay put at r = 1. Gate durations are
/// unchanged.
NoiseParameters scale_noise(const NoiseParameters& base, double r);

struct DeviceModel {
  std::string name;
  CouplingGraph graph;
  NoiseParameters noise;
};

/// Built-in device models: sherbrooke, torino (heavy-hex), aria1, forte
/// (fully connected), instantiated at the requested qubit count.
DeviceModel device_preset(std::string_view name, std::uint32_t num_qubits);
std::span<const std::string_view> device_preset_names();
NoiseParameters preset_noise(std::string_view name);

}  // namespace measkit
