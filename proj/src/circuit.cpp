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

#include "measkit/circuit.hpp"

#include <algorithm>
#include <bit>

namespace measkit {

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kH:
      return "H";
    case GateKind::kS:
      return "S";
    case GateKind::kSdg:
      return "Sdg";
    case GateKind::kX:
      return "X";
    case GateKind::kZ:
      return "Z";
    case GateKind::kCZ:
      return "CZ";
    case GateKind::kCNOT:
      return "CNOT";
    case GateKind::kSWAP:
      return "SWAP";
    case GateKind::kRX:
      return "RX";
    case GateKind::kRY:
      return "RY";
    case GateKind::kRZ:
      return "RZ";
  }
  return "?";
}

GateKind gate_from_name(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "H") return GateKind::kH;
  if (upper == "S") return GateKind::kS;
  if (upper == "SDG") return GateKind::kSdg;
  if (upper == "X") return GateKind::kX;
  if (upper == "Z") return GateKind::kZ;
  if (upper == "CZ") return GateKind::kCZ;
  if (upper == "CNOT" || upper == "CX") return GateKind::kCNOT;
  if (upper == "SWAP") return GateKind::kSWAP;
  if (upper == "RX") return GateKind::kRX;
  if (upper == "RY") return GateKind::kRY;
  if (upper == "RZ") return GateKind::kRZ;
  throw ParseError("unknown gate '" + std::string(name) + "'");
}

bool is_two_qubit(GateKind kind) {
  return kind == GateKind::kCZ || kind == GateKind::kCNOT ||
         kind == GateKind::kSWAP;
}

bool is_clifford(GateKind kind) { return !is_rotation(kind); }

bool is_rotation(GateKind kind) {
  return kind == GateKind::kRX || kind == GateKind::kRY ||
         kind == GateKind::kRZ;
}

Gate Gate::one(GateKind kind, std::uint32_t q) {
  if (is_two_qubit(kind)) {
    throw ArgumentError("gate requires two operands");
  }
  return Gate{kind, q, q, 0.0};
}

Gate Gate::two(GateKind kind, std::uint32_t a, std::uint32_t b) {
  if (!is_two_qubit(kind)) {
    throw ArgumentError("gate takes a single operand");
  }
  if (a == b) {
    throw ArgumentError("two-qubit gate operands must be distinct");
  }
  return Gate{kind, a, b, 0.0};
}

Gate Gate::rotation(GateKind kind, std::uint32_t q, double angle) {
  if (!is_rotation(kind)) {
    throw ArgumentError("not a rotation gate");
  }
  return Gate{kind, q, q, angle};
}

Circuit::Circuit(std::uint32_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits == 0) {
    throw ArgumentError("circuit needs at least one qubit");
  }
}

void Circuit::push(const Gate& gate) {
  if (gate.q0 >= num_qubits_ || (gate.arity() == 2 && gate.q1 >= num_qubits_)) {
    throw ArgumentError("gate operand out of range");
  }
  if (gate.arity() == 2 && gate.q0 == gate.q1) {
    throw ArgumentError("two-qubit gate operands must be distinct");
  }
  gates_.push_back(gate);
}

bool Circuit::is_clifford() const {
  return std::all_of(gates_.begin(), gates_.end(),
                     [](const Gate& g) { return measkit::is_clifford(g.kind); });
}

int Circuit::depth() const {
  std::vector<int> busy(num_qubits_, 0);
  int depth = 0;
  for (const Gate& g : gates_) {
    int t = busy[g.q0];
    if (g.arity() == 2) t = std::max(t, busy[g.q1]);
    ++t;
    busy[g.q0] = t;
    if (g.arity() == 2) busy[g.q1] = t;
    depth = std::max(depth, t);
  }
  return depth;
}

int Circuit::two_qubit_count() const {
  int n = 0;
  for (const Gate& g : gates_) {
    if (g.kind == GateKind::kCZ || g.kind == GateKind::kCNOT) ++n;
    if (g.kind == GateKind::kSWAP) n += 3;
  }
  return n;
}

std::map<std::string, int> Circuit::gate_counts() const {
  std::map<std::string, int> counts;
  for (const Gate& g : gates_) {
    ++counts[std::string(gate_name(g.kind))];
  }
  return counts;
}

GateStats gate_stats(const Circuit& circuit) {
  return GateStats{circuit.two_qubit_count(), circuit.depth(),
                   circuit.gate_counts()};
}

namespace {

struct Row {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  std::uint8_t sign = 0;  // (-1)^sign
};

// Conjugation P -> G P G^dagger in the symplectic picture. Sign rules
// follow the Aaronson-Gottesman tableau updates.
void apply_gate_row(Row& r, const Gate& g) {
  const std::uint64_t m0 = std::uint64_t{1} << g.q0;
  const std::uint64_t m1 = std::uint64_t{1} << g.q1;
  switch (g.kind) {
    case GateKind::kH: {
      const bool x = r.x & m0, z = r.z & m0;
      r.sign ^= static_cast<std::uint8_t>(x && z);
      r.x = (r.x & ~m0) | (z ? m0 : 0);
      r.z = (r.z & ~m0) | (x ? m0 : 0);
      break;
    }
    case GateKind::kS: {
      const bool x = r.x & m0, z = r.z & m0;
      r.sign ^= static_cast<std::uint8_t>(x && z);
      if (x) r.z ^= m0;
      break;
    }
    case GateKind::kSdg: {
      const bool x = r.x & m0, z = r.z & m0;
      r.sign ^= static_cast<std::uint8_t>(x && !z);
      if (x) r.z ^= m0;
      break;
    }
    case GateKind::kX:
      r.sign ^= static_cast<std::uint8_t>((r.z & m0) != 0);
      break;
    case GateKind::kZ:
      r.sign ^= static_cast<std::uint8_t>((r.x & m0) != 0);
      break;
    case GateKind::kCNOT: {
      const bool xc = r.x & m0, zc = r.z & m0;
      const bool xt = r.x & m1, zt = r.z & m1;
      r.sign ^= static_cast<std::uint8_t>(xc && zt && !(xt ^ zc));
      if (xc) r.x ^= m1;
      if (zt) r.z ^= m0;
      break;
    }
    case GateKind::kCZ: {
      const bool xa = r.x & m0, za = r.z & m0;
      const bool xb = r.x & m1, zb = r.z & m1;
      r.sign ^= static_cast<std::uint8_t>(xa && xb && (za ^ zb));
      if (xb) r.z ^= m0;
      if (xa) r.z ^= m1;
      break;
    }
    case GateKind::kSWAP: {
      const bool xa = r.x & m0, za = r.z & m0;
      const bool xb = r.x & m1, zb = r.z & m1;
      r.x = (r.x & ~(m0 | m1)) | (xb ? m0 : 0) | (xa ? m1 : 0);
      r.z = (r.z & ~(m0 | m1)) | (zb ? m0 : 0) | (za ? m1 : 0);
      break;
    }
    default:
      throw ArgumentError("cannot conjugate a Pauli through a non-Clifford gate");
  }
}

}  // namespace

StabilizerTableau::StabilizerTableau(std::span<const PauliString> rows) {
  if (rows.empty()) {
    throw ArgumentError("tableau needs at least one generator row");
  }
  num_qubits_ = rows.front().num_qubits();
  for (const PauliString& p : rows) {
    if (p.num_qubits() != num_qubits_) {
      throw ArgumentError("tableau rows must share a qubit count");
    }
  }
  if (!pairwise_fully_commuting(rows)) {
    throw NumericalError("tableau rows must pairwise commute");
  }
  for (const PauliString& p : rows) {
    x_.push_back(p.x_bits());
    z_.push_back(p.z_bits());
    sign_.push_back(0);
  }
}

SignedPauli StabilizerTableau::row(std::size_t i) const {
  return SignedPauli{PauliString(num_qubits_, x_[i], z_[i]),
                     sign_[i] ? -1 : 1};
}

void StabilizerTableau::apply(const Gate& gate) {
  for (std::size_t i = 0; i < x_.size(); ++i) {
    Row r{x_[i], z_[i], sign_[i]};
    apply_gate_row(r, gate);
    x_[i] = r.x;
    z_[i] = r.z;
    sign_[i] = r.sign;
  }
}

void StabilizerTableau::apply(const Circuit& circuit) {
  for (const Gate& g : circuit.gates()) {
    apply(g);
  }
}

void StabilizerTableau::reduce() {
  // Row-echelon over the 2N-bit (x|z) rows; the eliminated rows are
  // products of kept generators, so dropping them keeps the generated
  // group intact. Combination is phase-free: rows touched by a row
  // operation have their sign bit reset.
  std::vector<Row> rows(x_.size());
  std::vector<bool> combined(x_.size(), false);
  for (std::size_t i = 0; i < x_.size(); ++i) {
    rows[i] = {x_[i], z_[i], sign_[i]};
  }
  std::size_t rank = 0;
  for (std::uint32_t col = 0; col < 2 * num_qubits_ && rank < rows.size();
       ++col) {
    const bool x_half = col < num_qubits_;
    const std::uint64_t m = std::uint64_t{1} << (x_half ? col : col - num_qubits_);
    auto bit = [&](const Row& r) {
      return ((x_half ? r.x : r.z) & m) != 0;
    };
    std::size_t pivot = rank;
    while (pivot < rows.size() && !bit(rows[pivot])) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    std::swap(combined[rank], combined[pivot]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (bit(rows[i])) {
        rows[i].x ^= rows[rank].x;
        rows[i].z ^= rows[rank].z;
        combined[i] = true;
      }
    }
    ++rank;
  }
  x_.clear();
  z_.clear();
  sign_.clear();
  for (std::size_t i = 0; i < rank; ++i) {
    x_.push_back(rows[i].x);
    z_.push_back(rows[i].z);
    sign_.push_back(combined[i] ? 0 : rows[i].sign);
  }
}

SignedPauli conjugate(const PauliString& p, const Circuit& circuit) {
  if (p.num_qubits() > circuit.num_qubits()) {
    throw ArgumentError("Pauli is wider than the circuit register");
  }
  Row r{p.x_bits(), p.z_bits(), 0};
  for (const Gate& g : circuit.gates()) {
    apply_gate_row(r, g);
  }
  return SignedPauli{PauliString(circuit.num_qubits(), r.x, r.z),
                     r.sign ? -1 : 1};
}

namespace {

// Phase-free generator rows used during synthesis; row products are
// generator changes and do not need sign tracking (members are
// re-conjugated individually afterwards).
struct SynthRow {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
};

}  // namespace

Circuit diagonalize(std::span<const PauliString> group) {
  if (group.empty()) {
    throw ArgumentError("cannot diagonalize an empty group");
  }
  const std::uint32_t n = group.front().num_qubits();
  for (const PauliString& p : group) {
    if (p.num_qubits() != n) {
      throw ArgumentError("group members must share a qubit count");
    }
  }
  if (!pairwise_fully_commuting(group)) {
    throw NumericalError("diagonalize requires a pairwise commuting group");
  }

  Circuit circuit(n);
  std::vector<SynthRow> rows;
  rows.reserve(group.size());
  for (const PauliString& p : group) {
    rows.push_back({p.x_bits(), p.z_bits()});
  }
  const std::uint64_t ac_mask = group.size() > 1
                                    ? anticommuting_qubit_mask(group)
                                    : std::uint64_t{0};

  auto apply_to_rows = [&](const Gate& g) {
    for (SynthRow& r : rows) {
      Row full{r.x, r.z, 0};
      apply_gate_row(full, g);
      r.x = full.x;
      r.z = full.z;
    }
    circuit.push(g);
  };

  // Qubits outside the anticommuting set hold at most one non-identity
  // operator kind across the group; a local basis rotation maps it to Z.
  for (std::uint32_t q = 0; q < n; ++q) {
    const std::uint64_t m = std::uint64_t{1} << q;
    if (ac_mask & m) continue;
    bool has_x = false, has_y = false;
    for (const SynthRow& r : rows) {
      if (r.x & m) {
        (r.z & m ? has_y : has_x) = true;
      }
    }
    if (has_y) {
      apply_to_rows(Gate::one(GateKind::kSdg, q));
      apply_to_rows(Gate::one(GateKind::kH, q));
    } else if (has_x) {
      apply_to_rows(Gate::one(GateKind::kH, q));
    }
  }

  // Gaussian elimination of the X block restricted to the anticommuting
  // columns; row products change generators only.
  std::vector<std::uint32_t> pivots;
  std::size_t rank = 0;
  for (std::uint32_t q = 0; q < n && rank < rows.size(); ++q) {
    const std::uint64_t m = std::uint64_t{1} << q;
    if (!(ac_mask & m)) continue;
    std::size_t pivot_row = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i) {
      if (rows[i].x & m) {
        pivot_row = i;
        break;
      }
    }
    if (pivot_row == rows.size()) continue;
    std::swap(rows[rank], rows[pivot_row]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != rank && (rows[i].x & m)) {
        rows[i].x ^= rows[rank].x;
        rows[i].z ^= rows[rank].z;
      }
    }
    pivots.push_back(q);
    ++rank;
  }

  // Clear off-pivot X entries with CNOTs inside the anticommuting set.
  for (std::uint32_t q = 0; q < n; ++q) {
    const std::uint64_t m = std::uint64_t{1} << q;
    if (!(ac_mask & m)) continue;
    if (std::find(pivots.begin(), pivots.end(), q) != pivots.end()) continue;
    for (std::size_t i = 0; i < rank; ++i) {
      if (rows[i].x & m) {
        apply_to_rows(Gate::two(GateKind::kCNOT, pivots[i], q));
      }
    }
  }

  // The Z block restricted to pivot columns is symmetric by commutation;
  // clear it pairwise with CZ and its diagonal with S.
  for (std::size_t i = 0; i < rank; ++i) {
    for (std::size_t j = i + 1; j < rank; ++j) {
      if (rows[i].z & (std::uint64_t{1} << pivots[j])) {
        apply_to_rows(Gate::two(GateKind::kCZ, pivots[i], pivots[j]));
      }
    }
  }
  for (std::size_t i = 0; i < rank; ++i) {
    if (rows[i].z & (std::uint64_t{1} << pivots[i])) {
      apply_to_rows(Gate::one(GateKind::kS, pivots[i]));
    }
  }
  for (std::uint32_t q : pivots) {
    apply_to_rows(Gate::one(GateKind::kH, q));
  }

  for (const SynthRow& r : rows) {
    if (r.x != 0) {
      throw NumericalError("synthesis left a non-diagonal generator");
    }
  }
  return circuit;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> cz_adjacency(
    std::span<const PauliString> group) {
  const Circuit circuit = diagonalize(group);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const Gate& g : circuit.gates()) {
    if (g.kind == GateKind::kCZ || g.kind == GateKind::kCNOT) {
      const auto a = std::min(g.q0, g.q1);
      const auto b = std::max(g.q0, g.q1);
      if (std::find(edges.begin(), edges.end(), std::make_pair(a, b)) ==
          edges.end()) {
        edges.push_back({a, b});
      }
    }
  }
  return edges;
}

RoutedCircuit route(const Circuit& circuit, const CouplingGraph& graph) {
  if (circuit.num_qubits() > graph.num_qubits()) {
    throw ArgumentError("circuit register exceeds the coupling graph");
  }
  const std::uint32_t n = graph.num_qubits();
  RoutedCircuit out{Circuit(n), std::vector<std::uint32_t>(n)};
  std::vector<std::uint32_t> phys(n);   // logical -> physical
  std::vector<std::uint32_t> logical(n);  // physical -> logical
  for (std::uint32_t i = 0; i < n; ++i) {
    phys[i] = i;
    logical[i] = i;
  }

  auto emit_swap = [&](std::uint32_t a, std::uint32_t b) {
    out.circuit.push_two(GateKind::kCNOT, a, b);
    out.circuit.push_two(GateKind::kCNOT, b, a);
    out.circuit.push_two(GateKind::kCNOT, a, b);
    std::swap(logical[a], logical[b]);
    phys[logical[a]] = a;
    phys[logical[b]] = b;
  };

  auto route_pair = [&](std::uint32_t la, std::uint32_t lb) {
    std::uint32_t pa = phys[la];
    const std::uint32_t pb = phys[lb];
    int d = graph.distance(pa, pb);
    if (d == CouplingGraph::kInfiniteDistance) {
      throw RoutingError("gate operands lie in different graph components");
    }
    // Swap the first operand along a shortest path until adjacent,
    // taking the lowest-index neighbor that makes progress.
    while (d > 1) {
      std::uint32_t next = n;
      for (std::uint32_t v : graph.adjacency()[pa]) {
        if (graph.distance(v, pb) == d - 1) {
          next = v;
          break;
        }
      }
      emit_swap(pa, next);
      pa = next;
      --d;
    }
    return std::make_pair(pa, pb);
  };

  for (const Gate& g : circuit.gates()) {
    if (g.arity() == 1) {
      Gate moved = g;
      moved.q0 = phys[g.q0];
      moved.q1 = moved.q0;
      out.circuit.push(moved);
      continue;
    }
    if (g.kind == GateKind::kSWAP) {
      auto [pa, pb] = route_pair(g.q0, g.q1);
      emit_swap(pa, pb);
      continue;
    }
    auto [pa, pb] = route_pair(g.q0, g.q1);
    Gate moved = g;
    moved.q0 = pa;
    moved.q1 = pb;
    out.circuit.push(moved);
  }
  out.final_permutation = phys;
  return out;
}

}  // namespace measkit
