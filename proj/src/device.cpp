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

#include "measkit/device.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>

#include "measkit/rng.hpp"

namespace measkit {

CouplingGraph::CouplingGraph(
    std::uint32_t num_qubits,
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : num_qubits_(num_qubits), cache_(std::make_shared<DistanceCache>()) {
  if (num_qubits == 0) {
    throw ArgumentError("coupling graph needs at least one qubit");
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> normalized;
  for (auto [a, b] : edges) {
    if (a >= num_qubits || b >= num_qubits) {
      throw ArgumentError("edge endpoint out of range");
    }
    if (a == b) {
      throw ArgumentError("self-loop on qubit " + std::to_string(a));
    }
    normalized.emplace(std::min(a, b), std::max(a, b));
  }
  edges_.assign(normalized.begin(), normalized.end());
  adjacency_.resize(num_qubits);
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
  }
}

bool CouplingGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
  if (a >= num_qubits_ || b >= num_qubits_) return false;
  const auto& nbrs = adjacency_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

void CouplingGraph::ensure_distances() const {
  std::call_once(cache_->once, [this] {
    const std::uint32_t n = num_qubits_;
    std::vector<int> dist(static_cast<std::size_t>(n) * n, kInfiniteDistance);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t src = 0; src < n; ++src) {
      int* row = dist.data() + static_cast<std::size_t>(src) * n;
      row[src] = 0;
      queue.clear();
      queue.push_back(src);
      while (!queue.empty()) {
        const std::uint32_t v = queue.front();
        queue.pop_front();
        for (std::uint32_t w : adjacency_[v]) {
          if (row[w] == kInfiniteDistance) {
            row[w] = row[v] + 1;
            queue.push_back(w);
          }
        }
      }
    }
    cache_->dist = std::move(dist);
  });
}

int CouplingGraph::distance(std::uint32_t a, std::uint32_t b) const {
  if (a >= num_qubits_ || b >= num_qubits_) {
    throw ArgumentError("distance query out of range");
  }
  ensure_distances();
  return cache_->dist[static_cast<std::size_t>(a) * num_qubits_ + b];
}

const std::vector<int>& CouplingGraph::distances() const {
  ensure_distances();
  return cache_->dist;
}

int max_pairwise_distance(const CouplingGraph& graph,
                          std::span<const std::uint32_t> qubits) {
  for (std::uint32_t q : qubits) {
    if (q >= graph.num_qubits()) {
      throw ArgumentError("qubit index " + std::to_string(q) +
                          " outside the coupling graph");
    }
  }
  int best = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    for (std::size_t j = i + 1; j < qubits.size(); ++j) {
      const int d = graph.distance(qubits[i], qubits[j]);
      if (d == CouplingGraph::kInfiniteDistance) {
        return CouplingGraph::kInfiniteDistance;
      }
      best = std::max(best, d);
    }
  }
  return best;
}

TopologyKind topology_from_name(std::string_view name) {
  if (name == "ring") return TopologyKind::kRing;
  if (name == "complete") return TopologyKind::kComplete;
  if (name == "heavy_hex") return TopologyKind::kHeavyHex;
  if (name == "random_regular") return TopologyKind::kRandomRegular;
  throw ArgumentError("unknown topology '" + std::string(name) + "'");
}

std::string_view topology_name(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kRing:
      return "ring";
    case TopologyKind::kComplete:
      return "complete";
    case TopologyKind::kHeavyHex:
      return "heavy_hex";
    case TopologyKind::kRandomRegular:
      return "random_regular";
  }
  return "?";
}

namespace {

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

CouplingGraph make_ring(std::uint32_t n) {
  EdgeList edges;
  if (n == 2) {
    edges.push_back({0, 1});
  } else if (n >= 3) {
    for (std::uint32_t i = 0; i < n; ++i) {
      edges.push_back({i, (i + 1) % n});
    }
  }
  return CouplingGraph(n, std::move(edges));
}

CouplingGraph make_complete(std::uint32_t n) {
  EdgeList edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      edges.push_back({i, j});
    }
  }
  return CouplingGraph(n, std::move(edges));
}

// Heavy-hex brick lattice for odd code distance d: d horizontal rows of
// 2d-1 qubits, consecutive rows joined by single bridge qubits at
// columns = 0 (mod 4) below even rows and = 2 (mod 4) below odd rows.
// Vertices are numbered row-major, rows interleaved with the bridge row
// below them, so induced prefixes follow the physical layout.
struct HeavyHexLattice {
  std::uint32_t size = 0;
  EdgeList edges;
};

HeavyHexLattice build_heavy_hex(std::uint32_t d) {
  const std::uint32_t width = 2 * d - 1;
  // First pass assigns row-major ids: each row of `width` qubits is
  // followed by the bridge qubits of the gap below it.
  std::vector<std::vector<std::uint32_t>> ids(d);
  std::uint32_t next = 0;
  for (std::uint32_t r = 0; r < d; ++r) {
    ids[r].resize(width);
    for (std::uint32_t c = 0; c < width; ++c) {
      ids[r][c] = next++;
    }
    if (r + 1 < d) {
      const std::uint32_t offset = (r % 2 == 0) ? 0 : 2;
      for (std::uint32_t c = offset; c < width; c += 4) {
        ++next;  // bridge id placeholder
      }
    }
  }
  HeavyHexLattice lattice;
  next = 0;
  for (std::uint32_t r = 0; r < d; ++r) {
    for (std::uint32_t c = 0; c < width; ++c) {
      ++next;
      if (c > 0) {
        lattice.edges.push_back({ids[r][c - 1], ids[r][c]});
      }
    }
    if (r + 1 < d) {
      const std::uint32_t offset = (r % 2 == 0) ? 0 : 2;
      for (std::uint32_t c = offset; c < width; c += 4) {
        const std::uint32_t bridge = next++;
        lattice.edges.push_back({ids[r][c], bridge});
        lattice.edges.push_back({bridge, ids[r + 1][c]});
      }
    }
  }
  lattice.size = next;
  return lattice;
}

CouplingGraph make_heavy_hex(std::uint32_t n) {
  std::uint32_t d = 3;
  HeavyHexLattice lattice = build_heavy_hex(d);
  while (lattice.size < n) {
    d += 2;
    lattice = build_heavy_hex(d);
  }
  EdgeList kept;
  for (auto [a, b] : lattice.edges) {
    if (a < n && b < n) kept.push_back({a, b});
  }
  return CouplingGraph(n, std::move(kept));
}

CouplingGraph make_random_regular(std::uint32_t n, std::uint32_t degree,
                                  std::uint64_t seed) {
  if (degree >= n) {
    throw ArgumentError("random-regular degree must be below the qubit count");
  }
  if ((static_cast<std::uint64_t>(degree) * n) % 2 != 0) {
    throw ArgumentError("random-regular requires degree * num_qubits to be even");
  }
  if (degree == 0) {
    return CouplingGraph(n, {});
  }
  if (degree == n - 1) {
    // The unique simple (n-1)-regular graph; the pairing model almost
    // never lands on it.
    return make_complete(n);
  }
  auto rng = make_engine(substream(seed, "topology"));
  std::vector<std::uint32_t> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * degree);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    stubs.clear();
    for (std::uint32_t v = 0; v < n; ++v) {
      for (std::uint32_t k = 0; k < degree; ++k) stubs.push_back(v);
    }
    for (std::size_t i = stubs.size(); i > 1; --i) {
      std::swap(stubs[i - 1], stubs[uniform_below(rng, i)]);
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const std::uint32_t a = std::min(stubs[i], stubs[i + 1]);
      const std::uint32_t b = std::max(stubs[i], stubs[i + 1]);
      if (a == b || !edges.emplace(a, b).second) {
        ok = false;
        break;
      }
    }
    if (ok) {
      return CouplingGraph(n, EdgeList(edges.begin(), edges.end()));
    }
  }
  throw GenerationError("random-regular pairing failed after 1000 attempts");
}

}  // namespace

CouplingGraph generate_topology(TopologyKind kind, std::uint32_t num_qubits,
                                std::uint32_t degree, std::uint64_t seed) {
  switch (kind) {
    case TopologyKind::kRing:
      return make_ring(num_qubits);
    case TopologyKind::kComplete:
      return make_complete(num_qubits);
    case TopologyKind::kHeavyHex:
      return make_heavy_hex(num_qubits);
    case TopologyKind::kRandomRegular:
      return make_random_regular(num_qubits, degree, seed);
  }
  throw ArgumentError("unknown topology kind");
}

void NoiseParameters::validate() const {
  if (p_1q < 0 || p_1q > 1 || p_2q < 0 || p_2q > 1) {
    throw ArgumentError("gate error probabilities must lie in [0, 1]");
  }
  if (t1_us <= 0 || t2_us <= 0 || t_1q_us < 0 || t_2q_us < 0) {
    throw ArgumentError("relaxation times must be positive");
  }
  if (t2_us > 2.0 * t1_us + 1e-12) {
    throw ArgumentError("t2 must not exceed 2 * t1");
  }
}

NoiseParameters scale_noise(const NoiseParameters& base, double r) {
  if (r < 1.0) {
    throw ArgumentError("noise reduction ratio must be >= 1");
  }
  NoiseParameters scaled = base;
  scaled.p_1q = base.p_1q / r;
  scaled.p_2q = base.p_2q / r;
  if (r > 1.0) {
    scaled.t1_us = base.t1_us * std::log(r);
    scaled.t2_us = base.t2_us * std::log(r);
  }
  return scaled;
}

namespace {

constexpr std::array<std::string_view, 4> kPresetNames = {
    "sherbrooke", "torino", "aria1", "forte"};

}  // namespace

std::span<const std::string_view> device_preset_names() {
  return kPresetNames;
}

NoiseParameters preset_noise(std::string_view name) {
  if (name == "sherbrooke") {
    return {0.0002, 0.007, 259.7, 182.3, 0.057, 0.533};
  }
  if (name == "torino") {
    return {0.0003, 0.003, 160.5, 122.4, 0.032, 0.068};
  }
  if (name == "aria1") {
    return {0.0006, 0.086, 100e6, 1e6, 135.0, 600.0};
  }
  if (name == "forte") {
    return {0.0002, 0.010, 100e6, 1e6, 130.0, 970.0};
  }
  throw ArgumentError("unknown device preset '" + std::string(name) + "'");
}

DeviceModel device_preset(std::string_view name, std::uint32_t num_qubits) {
  const NoiseParameters noise = preset_noise(name);
  const TopologyKind kind = (name == "sherbrooke" || name == "torino")
                                ? TopologyKind::kHeavyHex
                                : TopologyKind::kComplete;
  return DeviceModel{std::string(name), generate_topology(kind, num_qubits),
                     noise};
}

}  // namespace measkit
