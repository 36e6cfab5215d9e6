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

// Brute-force dense-matrix oracles for tests. Everything here is built
// directly from gate definitions and Kronecker products, independent of
// the library's symplectic/tableau code paths it is used to check.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "measkit/circuit.hpp"
#include "measkit/pauli.hpp"

namespace oracles {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Mat single_pauli(char c) {
  Mat m = Mat::Zero(2, 2);
  const Complex i{0.0, 1.0};
  switch (c) {
    case 'I':
      m(0, 0) = 1;
      m(1, 1) = 1;
      break;
    case 'X':
      m(0, 1) = 1;
      m(1, 0) = 1;
      break;
    case 'Y':
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    case 'Z':
      m(0, 0) = 1;
      m(1, 1) = -1;
      break;
  }
  return m;
}

/// Dense matrix of a Pauli string; qubit 0 is the leftmost/most
/// significant factor.
inline Mat dense_pauli(const measkit::PauliString& p) {
  Mat out = single_pauli(p.at(0));
  for (std::uint32_t q = 1; q < p.num_qubits(); ++q) {
    out = kron(out, single_pauli(p.at(q)));
  }
  return out;
}

inline bool dense_commutes(const Mat& a, const Mat& b, double tol = 1e-12) {
  return (a * b - b * a).cwiseAbs().maxCoeff() <= tol;
}

/// Basis-state bit of qubit q (qubit 0 = most significant).
inline bool index_bit(std::uint64_t index, std::uint32_t q, std::uint32_t n) {
  return (index >> (n - 1 - q)) & 1;
}

inline std::uint64_t flip_bit(std::uint64_t index, std::uint32_t q,
                              std::uint32_t n) {
  return index ^ (std::uint64_t{1} << (n - 1 - q));
}

/// Full 2^N x 2^N matrix of one gate, assembled entry by entry from the
/// gate's action on basis states.
inline Mat dense_gate(const measkit::Gate& g, std::uint32_t n) {
  using measkit::GateKind;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m = Mat::Zero(dim, dim);
  const Complex i{0.0, 1.0};
  const double s = 0.7071067811865475244;
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
    const bool b0 = index_bit(x, g.q0, n);
    switch (g.kind) {
      case GateKind::kH: {
        m(x, x) += b0 ? -s : s;
        m(flip_bit(x, g.q0, n), x) += s;
        break;
      }
      case GateKind::kS:
        m(x, x) = b0 ? i : Complex{1.0};
        break;
      case GateKind::kSdg:
        m(x, x) = b0 ? -i : Complex{1.0};
        break;
      case GateKind::kX:
        m(flip_bit(x, g.q0, n), x) = 1.0;
        break;
      case GateKind::kZ:
        m(x, x) = b0 ? -1.0 : 1.0;
        break;
      case GateKind::kRX: {
        const double c = std::cos(g.angle / 2), sn = std::sin(g.angle / 2);
        m(x, x) += c;
        m(flip_bit(x, g.q0, n), x) += -i * sn;
        break;
      }
      case GateKind::kRY: {
        const double c = std::cos(g.angle / 2), sn = std::sin(g.angle / 2);
        m(x, x) += c;
        m(flip_bit(x, g.q0, n), x) += b0 ? -sn : sn;
        break;
      }
      case GateKind::kRZ:
        m(x, x) = std::exp((b0 ? i : -i) * (g.angle / 2));
        break;
      case GateKind::kCZ: {
        const bool b1 = index_bit(x, g.q1, n);
        m(x, x) = (b0 && b1) ? -1.0 : 1.0;
        break;
      }
      case GateKind::kCNOT: {
        m(b0 ? flip_bit(x, g.q1, n) : x, x) = 1.0;
        break;
      }
      case GateKind::kSWAP: {
        const bool b1 = index_bit(x, g.q1, n);
        std::uint64_t y = x;
        if (b0 != b1) {
          y = flip_bit(flip_bit(x, g.q0, n), g.q1, n);
        }
        m(y, x) = 1.0;
        break;
      }
    }
  }
  return m;
}

/// Product of the circuit's gate matrices in application order.
inline Mat dense_unitary(const measkit::Circuit& circuit) {
  const Eigen::Index dim = Eigen::Index{1} << circuit.num_qubits();
  Mat u = Mat::Identity(dim, dim);
  for (const measkit::Gate& g : circuit.gates()) {
    u = dense_gate(g, circuit.num_qubits()) * u;
  }
  return u;
}

/// Wire permutation as a unitary: basis state x (qubit q at bit q) maps
/// to the state with qubit q's bit moved to wire perm[q].
inline Mat permutation_matrix(const std::vector<std::uint32_t>& perm,
                              std::uint32_t n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m = Mat::Zero(dim, dim);
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
    std::uint64_t y = 0;
    for (std::uint32_t q = 0; q < n; ++q) {
      if (index_bit(x, q, n)) {
        y |= std::uint64_t{1} << (n - 1 - perm[q]);
      }
    }
    m(y, x) = 1.0;
  }
  return m;
}

/// True iff m is diagonal with +-1 entries, i.e. a Z/I-type Pauli.
inline bool is_z_type_matrix(const Mat& m, double tol = 1e-10) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (r == c) {
        if (std::abs(std::abs(m(r, c).real()) - 1.0) > tol ||
            std::abs(m(r, c).imag()) > tol) {
          return false;
        }
      } else if (std::abs(m(r, c)) > tol) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace oracles
