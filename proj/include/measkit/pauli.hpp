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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "measkit/errors.hpp"

namespace measkit {

/// An N-qubit Pauli operator in binary symplectic form, phase-free.
///
/// Bit j of the x/z masks describes qubit j, and qubit 0 is the leftmost
/// character of the text form. Per-qubit encoding:
///   I = (x=0, z=0), X = (1, 0), Z = (0, 1), Y = (1, 1).
///
/// Coefficients and signs live elsewhere (WeightedObservable, tableau
/// rows); this type only carries the operator pattern.
class PauliString {
 public:
  static constexpr std::uint32_t kMaxQubits = 64;

  PauliString() = default;
  PauliString(std::uint32_t num_qubits, std::uint64_t x_bits, std::uint64_t z_bits);

  static PauliString identity(std::uint32_t num_qubits);

  std::uint32_t num_qubits() const { return num_qubits_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }

  bool is_identity() const { return x_ == 0 && z_ == 0; }

  /// Character at qubit position q, one of 'I', 'X', 'Y', 'Z'.
  char at(std::uint32_t q) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::uint32_t num_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliHash {
  std::size_t operator()(const PauliString& p) const noexcept;
};

/// Parses an uppercase {I,X,Y,Z} string of length num_qubits.
/// Reports the offending index on failure.
PauliString parse_pauli(std::string_view text, std::uint32_t num_qubits);
std::string render_pauli(const PauliString& p);

/// Bit j set iff the single-qubit operators of a and b anticommute at
/// qubit j.
std::uint64_t anticommuting_mask(const PauliString& a, const PauliString& b);

/// True iff a and b commute as operators: an even number of qubit
/// positions anticommute locally.
bool fully_commutes(const PauliString& a, const PauliString& b);

/// True iff every qubit position commutes locally (each pair is I-padded
/// or equal non-identity). Implies fully_commutes.
bool qubitwise_commutes(const PauliString& a, const PauliString& b);

bool pairwise_fully_commuting(std::span<const PauliString> group);
bool pairwise_qubitwise_commuting(std::span<const PauliString> group);

/// Union over all pairs of the local anticommutation masks.
std::uint64_t anticommuting_qubit_mask(std::span<const PauliString> group);

/// Qubit positions where some pair in the group anticommutes locally.
/// The set size is the N_AC of the group. Empty iff the group is
/// pairwise qubit-wise commuting.
std::vector<std::uint32_t> anticommuting_qubits(std::span<const PauliString> group);

struct Term {
  double coeff = 0.0;
  PauliString pauli;
};

/// A real-weighted sum of Pauli strings over a fixed qubit count.
///
/// Construction merges duplicate strings by summing coefficients and
/// drops terms whose merged |coeff| falls below kCoeffFloor, keeping
/// grouping deterministic under noisy input coefficients. First-seen
/// order of the surviving strings is preserved.
class WeightedObservable {
 public:
  static constexpr double kCoeffFloor = 1e-12;

  WeightedObservable(std::uint32_t num_qubits, std::vector<Term> terms);

  std::uint32_t num_qubits() const { return num_qubits_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const Term& term(std::size_t i) const { return terms_[i]; }

  /// Number of below-floor terms discarded at ingestion.
  std::size_t dropped_terms() const { return dropped_; }
  /// Number of duplicate strings merged at ingestion.
  std::size_t merged_terms() const { return merged_; }

 private:
  std::uint32_t num_qubits_ = 0;
  std::vector<Term> terms_;
  std::size_t dropped_ = 0;
  std::size_t merged_ = 0;
};

namespace detail {

/// Exponent g in P(x1,z1) P(x2,z2) = i^g P(x1^x2, z1^z2), taking Y as
/// the honest Hermitian Y rather than iXZ. Needed internally for
/// variance double sums; not part of the public algebra.
int pauli_product_phase_exponent(const PauliString& a, const PauliString& b);

}  // namespace detail

}  // namespace measkit
