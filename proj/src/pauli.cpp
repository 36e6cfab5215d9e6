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

#include "measkit/pauli.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

namespace measkit {

namespace {

std::uint64_t width_mask(std::uint32_t num_qubits) {
  return num_qubits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << num_qubits) - 1);
}

void check_width(std::uint32_t num_qubits) {
  if (num_qubits == 0) {
    throw ArgumentError("PauliString requires at least one qubit");
  }
  if (num_qubits > PauliString::kMaxQubits) {
    throw ArgumentError("PauliString supports at most 64 qubits, got " +
                        std::to_string(num_qubits));
  }
}

void check_same_width(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ArgumentError("Pauli width mismatch: " + std::to_string(a.num_qubits()) +
                        " vs " + std::to_string(b.num_qubits()));
  }
}

}  // namespace

PauliString::PauliString(std::uint32_t num_qubits, std::uint64_t x_bits,
                         std::uint64_t z_bits)
    : num_qubits_(num_qubits), x_(x_bits), z_(z_bits) {
  check_width(num_qubits);
  const std::uint64_t mask = width_mask(num_qubits);
  if ((x_ & ~mask) != 0 || (z_ & ~mask) != 0) {
    throw ArgumentError("Pauli bit masks exceed the declared qubit count");
  }
}

PauliString PauliString::identity(std::uint32_t num_qubits) {
  return PauliString(num_qubits, 0, 0);
}

char PauliString::at(std::uint32_t q) const {
  if (q >= num_qubits_) {
    throw ArgumentError("qubit index " + std::to_string(q) + " out of range");
  }
  const bool x = (x_ >> q) & 1;
  const bool z = (z_ >> q) & 1;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::size_t PauliHash::operator()(const PauliString& p) const noexcept {
  std::uint64_t h = p.x_bits() * 0x9e3779b97f4a7c15ull;
  h ^= p.z_bits() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= static_cast<std::uint64_t>(p.num_qubits()) << 32;
  return static_cast<std::size_t>(h);
}

PauliString parse_pauli(std::string_view text, std::uint32_t num_qubits) {
  check_width(num_qubits);
  if (text.size() != num_qubits) {
    throw ParseError("Pauli text has length " + std::to_string(text.size()) +
                     ", expected " + std::to_string(num_qubits));
  }
  std::uint64_t x = 0, z = 0;
  for (std::uint32_t q = 0; q < num_qubits; ++q) {
    switch (text[q]) {
      case 'I':
        break;
      case 'X':
        x |= std::uint64_t{1} << q;
        break;
      case 'Y':
        x |= std::uint64_t{1} << q;
        z |= std::uint64_t{1} << q;
        break;
      case 'Z':
        z |= std::uint64_t{1} << q;
        break;
      default:
        throw ParseError(std::string("invalid Pauli symbol '") + text[q] +
                         "' at index " + std::to_string(q));
    }
  }
  return PauliString(num_qubits, x, z);
}

std::string render_pauli(const PauliString& p) {
  std::string out(p.num_qubits(), 'I');
  for (std::uint32_t q = 0; q < p.num_qubits(); ++q) {
    out[q] = p.at(q);
  }
  return out;
}

std::uint64_t anticommuting_mask(const PauliString& a, const PauliString& b) {
  check_same_width(a, b);
  return (a.x_bits() & b.z_bits()) ^ (a.z_bits() & b.x_bits());
}

bool fully_commutes(const PauliString& a, const PauliString& b) {
  return (std::popcount(anticommuting_mask(a, b)) & 1) == 0;
}

bool qubitwise_commutes(const PauliString& a, const PauliString& b) {
  return anticommuting_mask(a, b) == 0;
}

bool pairwise_fully_commuting(std::span<const PauliString> group) {
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      if (!fully_commutes(group[i], group[j])) return false;
    }
  }
  return true;
}

bool pairwise_qubitwise_commuting(std::span<const PauliString> group) {
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      if (!qubitwise_commutes(group[i], group[j])) return false;
    }
  }
  return true;
}

std::uint64_t anticommuting_qubit_mask(std::span<const PauliString> group) {
  if (group.empty()) {
    throw ArgumentError("anticommuting_qubits requires a non-empty group");
  }
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      mask |= anticommuting_mask(group[i], group[j]);
    }
  }
  return mask;
}

std::vector<std::uint32_t> anticommuting_qubits(std::span<const PauliString> group) {
  const std::uint64_t mask = anticommuting_qubit_mask(group);
  std::vector<std::uint32_t> out;
  for (std::uint32_t q = 0; q < group.front().num_qubits(); ++q) {
    if ((mask >> q) & 1) out.push_back(q);
  }
  return out;
}

WeightedObservable::WeightedObservable(std::uint32_t num_qubits,
                                       std::vector<Term> terms)
    : num_qubits_(num_qubits) {
  check_width(num_qubits);
  std::unordered_map<PauliString, std::size_t, PauliHash> index;
  index.reserve(terms.size());
  for (const Term& t : terms) {
    if (t.pauli.num_qubits() != num_qubits_) {
      throw ArgumentError("observable term width mismatch");
    }
    if (!std::isfinite(t.coeff)) {
      throw ArgumentError("observable coefficients must be finite");
    }
    auto [it, inserted] = index.try_emplace(t.pauli, terms_.size());
    if (inserted) {
      terms_.push_back(t);
    } else {
      terms_[it->second].coeff += t.coeff;
      ++merged_;
    }
  }
  std::vector<Term> kept;
  kept.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (std::abs(t.coeff) < kCoeffFloor) {
      ++dropped_;
    } else {
      kept.push_back(t);
    }
  }
  terms_ = std::move(kept);
}

namespace detail {

int pauli_product_phase_exponent(const PauliString& a, const PauliString& b) {
  check_same_width(a, b);
  // Per-qubit σ(a)σ(b) = i^g σ(a^b) with g accumulated mod 4. The cyclic
  // products XY=iZ, YZ=iX, ZX=iY contribute +1; their reverses -1.
  int g = 0;
  for (std::uint32_t q = 0; q < a.num_qubits(); ++q) {
    const int ax = (a.x_bits() >> q) & 1, az = (a.z_bits() >> q) & 1;
    const int bx = (b.x_bits() >> q) & 1, bz = (b.z_bits() >> q) & 1;
    if ((ax | az) == 0 || (bx | bz) == 0) continue;
    if (ax == bx && az == bz) continue;
    // Map I,X,Y,Z -> 0,1,2,3 in cyclic order X->Y->Z.
    const int ka = ax && az ? 2 : (ax ? 1 : 3);
    const int kb = bx && bz ? 2 : (bx ? 1 : 3);
    g += ((kb - ka) % 3 + 3) % 3 == 1 ? 1 : -1;
  }
  return ((g % 4) + 4) % 4;
}

}  // namespace detail

}  // namespace measkit
