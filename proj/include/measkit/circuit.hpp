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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "measkit/device.hpp"
#include "measkit/pauli.hpp"

namespace measkit {

enum class GateKind : std::uint8_t {
  kH,
  kS,
  kSdg,
  kX,
  kZ,
  kCZ,
  kCNOT,
  kSWAP,
  kRX,
  kRY,
  kRZ,
};

std::string_view gate_name(GateKind kind);
GateKind gate_from_name(std::string_view name);
bool is_two_qubit(GateKind kind);
bool is_clifford(GateKind kind);
bool is_rotation(GateKind kind);

struct Gate {
  GateKind kind = GateKind::kH;
  std::uint32_t q0 = 0;
  std::uint32_t q1 = 0;     // second operand of two-qubit gates
  double angle = 0.0;       // rotation gates only

  static Gate one(GateKind kind, std::uint32_t q);
  static Gate two(GateKind kind, std::uint32_t a, std::uint32_t b);
  static Gate rotation(GateKind kind, std::uint32_t q, double angle);

  std::uint32_t arity() const { return is_two_qubit(kind) ? 2 : 1; }
};

/// An ordered gate list on a fixed register. Depth follows as-soon-as-
/// possible scheduling with every gate occupying one time unit on each
/// of its operands.
class Circuit {
 public:
  explicit Circuit(std::uint32_t num_qubits);

  std::uint32_t num_qubits() const { return num_qubits_; }
  std::span<const Gate> gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  void push(const Gate& gate);
  void push_one(GateKind kind, std::uint32_t q) { push(Gate::one(kind, q)); }
  void push_two(GateKind kind, std::uint32_t a, std::uint32_t b) {
    push(Gate::two(kind, a, b));
  }

  bool is_clifford() const;
  int depth() const;
  /// CZ + CNOT count, with an undecomposed SWAP counted as its three
  /// CNOT equivalent.
  int two_qubit_count() const;
  std::map<std::string, int> gate_counts() const;

 private:
  std::uint32_t num_qubits_ = 0;
  std::vector<Gate> gates_;
};

struct GateStats {
  int n_2q = 0;
  int depth = 0;
  std::map<std::string, int> counts;
};

GateStats gate_stats(const Circuit& circuit);

/// A Pauli operator with a tracked real sign, the result of conjugating
/// a phase-free PauliString through a Clifford circuit.
struct SignedPauli {
  PauliString pauli;
  int sign = 1;  // +1 or -1

  bool is_z_type() const { return pauli.x_bits() == 0; }
};

/// Binary symplectic generator rows with sign bits. Rows must pairwise
/// commute; `reduce()` drops products that are dependent over GF(2).
class StabilizerTableau {
 public:
  explicit StabilizerTableau(std::span<const PauliString> rows);

  std::size_t num_rows() const { return x_.size(); }
  std::uint32_t num_qubits() const { return num_qubits_; }
  SignedPauli row(std::size_t i) const;

  /// Conjugates every row by the gate: P -> G P G^dagger.
  void apply(const Gate& gate);
  void apply(const Circuit& circuit);

  /// Gaussian elimination over GF(2): keeps an independent generating
  /// subset of the rows (at most num_qubits of them).
  void reduce();

 private:
  std::uint32_t num_qubits_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
  std::vector<std::uint8_t> sign_;
};

/// Conjugates a single Pauli through a Clifford circuit.
SignedPauli conjugate(const PauliString& p, const Circuit& circuit);

/// Synthesizes the Clifford circuit rotating every member of a pairwise
/// commuting group to a Z/I-only operator.
///
/// Entangling gates act only within the group's anticommuting-qubit set
/// and number at most N_AC (N_AC - 1) / 2; qubit-wise commuting groups
/// come out with single-qubit gates only. Deterministic: columns are
/// pivoted lowest qubit index first.
Circuit diagonalize(std::span<const PauliString> group);

/// Qubit pairs on which the canonical diagonalization emits an
/// entangling gate; empty for qubit-wise commuting groups.
std::vector<std::pair<std::uint32_t, std::uint32_t>> cz_adjacency(
    std::span<const PauliString> group);

struct RoutedCircuit {
  Circuit circuit;
  /// final_permutation[logical] = physical wire after all swaps.
  std::vector<std::uint32_t> final_permutation;
};

/// Makes every two-qubit gate act on a coupling-graph edge by greedy
/// swap-toward insertion along BFS shortest paths, each SWAP decomposed
/// into three CNOTs. A single gate between qubits at distance D costs
/// exactly 3(D-1) extra CNOTs.
RoutedCircuit route(const Circuit& circuit, const CouplingGraph& graph);

}  // namespace measkit
