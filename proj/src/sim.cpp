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

#include "measkit/sim.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>

#include "measkit/rng.hpp"

namespace measkit {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_capacity(std::uint32_t num_qubits) {
  if (num_qubits == 0) {
    throw ArgumentError("state needs at least one qubit");
  }
  if (num_qubits > DensityMatrix::kMaxQubits) {
    throw CapacityError("exact simulation is capped at " +
                        std::to_string(DensityMatrix::kMaxQubits) +
                        " qubits, got " + std::to_string(num_qubits));
  }
}

/// Index bit that stores qubit q (qubit 0 = most significant bit).
std::uint64_t index_bit(std::uint32_t q, std::uint32_t num_qubits) {
  return std::uint64_t{1} << (num_qubits - 1 - q);
}

std::uint64_t qubit_mask_to_index_mask(std::uint64_t qmask,
                                       std::uint32_t num_qubits) {
  std::uint64_t out = 0;
  for (std::uint32_t q = 0; q < num_qubits; ++q) {
    if ((qmask >> q) & 1) out |= index_bit(q, num_qubits);
  }
  return out;
}

CMatrix gate_matrix(const Gate& g) {
  const double inv_sqrt2 = 0.7071067811865475244;
  switch (g.kind) {
    case GateKind::kH: {
      CMatrix m(2, 2);
      m << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
      return m;
    }
    case GateKind::kS: {
      CMatrix m = CMatrix::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = kI;
      return m;
    }
    case GateKind::kSdg: {
      CMatrix m = CMatrix::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = -kI;
      return m;
    }
    case GateKind::kX: {
      CMatrix m = CMatrix::Zero(2, 2);
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      return m;
    }
    case GateKind::kZ: {
      CMatrix m = CMatrix::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      return m;
    }
    case GateKind::kRX: {
      CMatrix m(2, 2);
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      m << Complex(c, 0), -kI * s, -kI * s, Complex(c, 0);
      return m;
    }
    case GateKind::kRY: {
      CMatrix m(2, 2);
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      m << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
      return m;
    }
    case GateKind::kRZ: {
      CMatrix m = CMatrix::Zero(2, 2);
      m(0, 0) = std::exp(-kI * (g.angle / 2));
      m(1, 1) = std::exp(kI * (g.angle / 2));
      return m;
    }
    case GateKind::kCZ: {
      CMatrix m = CMatrix::Identity(4, 4);
      m(3, 3) = -1.0;
      return m;
    }
    case GateKind::kCNOT: {
      // Ordered as (q0, q1) = (control, target), control the high bit.
      CMatrix m = CMatrix::Zero(4, 4);
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      m(2, 3) = 1.0;
      m(3, 2) = 1.0;
      return m;
    }
    case GateKind::kSWAP: {
      CMatrix m = CMatrix::Zero(4, 4);
      m(0, 0) = 1.0;
      m(1, 2) = 1.0;
      m(2, 1) = 1.0;
      m(3, 3) = 1.0;
      return m;
    }
  }
  throw ArgumentError("unknown gate kind");
}

/// rho -> U rho U^dagger for a small unitary or Kraus term acting on the
/// listed qubits. `qubits` orders the operator's bits high to low.
void apply_operator(CMatrix& rho, const CMatrix& u,
                    std::span<const std::uint32_t> qubits,
                    std::uint32_t num_qubits) {
  const std::uint32_t k = static_cast<std::uint32_t>(qubits.size());
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  const std::uint64_t sub = std::uint64_t{1} << k;
  std::vector<std::uint64_t> bits(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    bits[i] = index_bit(qubits[i], num_qubits);
  }
  std::uint64_t op_mask = 0;
  for (std::uint64_t b : bits) op_mask |= b;

  auto pattern = [&](std::uint64_t m) {
    std::uint64_t p = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
      if ((m >> (k - 1 - i)) & 1) p |= bits[i];
    }
    return p;
  };
  std::vector<std::uint64_t> patterns(sub);
  for (std::uint64_t m = 0; m < sub; ++m) patterns[m] = pattern(m);

  std::vector<Complex> buf(sub);
  // Left multiply: transform row indices of every column.
  for (std::uint64_t col = 0; col < dim; ++col) {
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & op_mask) continue;
      for (std::uint64_t m = 0; m < sub; ++m) buf[m] = rho(base | patterns[m], col);
      for (std::uint64_t r = 0; r < sub; ++r) {
        Complex acc = 0;
        for (std::uint64_t m = 0; m < sub; ++m) acc += u(r, m) * buf[m];
        rho(base | patterns[r], col) = acc;
      }
    }
  }
  // Right multiply by U^dagger: transform column indices with conj(U).
  for (std::uint64_t row = 0; row < dim; ++row) {
    for (std::uint64_t base = 0; base < dim; ++base) {
      if (base & op_mask) continue;
      for (std::uint64_t m = 0; m < sub; ++m) buf[m] = rho(row, base | patterns[m]);
      for (std::uint64_t c = 0; c < sub; ++c) {
        Complex acc = 0;
        for (std::uint64_t m = 0; m < sub; ++m) acc += std::conj(u(c, m)) * buf[m];
        rho(row, base | patterns[c]) = acc;
      }
    }
  }
}

/// rho -> sum_K K rho K^dagger on one qubit, as a single fused pass over
/// the qubit's 2x2 block structure.
void apply_kraus_1q(CMatrix& rho, const KrausChannel& channel, std::uint32_t q,
                    std::uint32_t num_qubits) {
  Complex super[4][4] = {};
  for (const CMatrix& k : channel.ops) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int a2 = 0; a2 < 2; ++a2) {
          for (int b2 = 0; b2 < 2; ++b2) {
            super[a * 2 + b][a2 * 2 + b2] += k(a, a2) * std::conj(k(b, b2));
          }
        }
      }
    }
  }
  const std::uint64_t bit = index_bit(q, num_qubits);
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (std::uint64_t c = 0; c < dim; ++c) {
      if (c & bit) continue;
      const Complex v[4] = {
          rho(r, c), rho(r, c | bit), rho(r | bit, c), rho(r | bit, c | bit)};
      Complex w[4] = {};
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          w[i] += super[i][j] * v[j];
        }
      }
      rho(r, c) = w[0];
      rho(r, c | bit) = w[1];
      rho(r | bit, c) = w[2];
      rho(r | bit, c | bit) = w[3];
    }
  }
}

/// Replaces the listed qubits with the maximally mixed state with
/// probability p: (1-p) rho + p I/2^k (x) Tr_k[rho].
void apply_depolarizing(CMatrix& rho, double p,
                        std::span<const std::uint32_t> qubits,
                        std::uint32_t num_qubits) {
  if (p <= 0.0) return;
  const std::uint32_t k = static_cast<std::uint32_t>(qubits.size());
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  const std::uint64_t sub = std::uint64_t{1} << k;
  std::uint64_t op_mask = 0;
  for (std::uint32_t q : qubits) op_mask |= index_bit(q, num_qubits);

  // Partial trace over the operand qubits, indexed by the residual bits.
  CMatrix reduced = CMatrix::Zero(dim >> k, dim >> k);
  std::vector<std::uint64_t> rest;  // compact residual index -> full bits
  rest.reserve(dim >> k);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (!(i & op_mask)) rest.push_back(i);
  }
  std::vector<std::uint64_t> subpatterns;
  subpatterns.reserve(sub);
  for (std::uint64_t s = op_mask;; s = (s - 1) & op_mask) {
    subpatterns.push_back(s);
    if (s == 0) break;
  }
  for (std::size_t a = 0; a < rest.size(); ++a) {
    for (std::size_t b = 0; b < rest.size(); ++b) {
      Complex acc = 0;
      for (std::uint64_t s : subpatterns) {
        acc += rho(rest[a] | s, rest[b] | s);
      }
      reduced(a, b) = acc;
    }
  }
  rho *= (1.0 - p);
  const double w = p / static_cast<double>(sub);
  for (std::size_t a = 0; a < rest.size(); ++a) {
    for (std::size_t b = 0; b < rest.size(); ++b) {
      const Complex v = w * reduced(a, b);
      for (std::uint64_t s : subpatterns) {
        rho(rest[a] | s, rest[b] | s) += v;
      }
    }
  }
}

void apply_thermal_all(CMatrix& rho, double t_us, const NoiseChannelSpec& spec,
                       std::uint32_t num_qubits) {
  if (t_us <= 0.0) return;
  const KrausChannel channel =
      thermal_relaxation_channel(t_us, spec.t1_us, spec.t2_us);
  for (std::uint32_t q = 0; q < num_qubits; ++q) {
    apply_kraus_1q(rho, channel, q, num_qubits);
  }
}

}  // namespace

DensityMatrix::DensityMatrix(std::uint32_t num_qubits)
    : num_qubits_(num_qubits) {
  check_capacity(num_qubits);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  mat_ = CMatrix::Zero(dim, dim);
  mat_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::pure(std::uint32_t num_qubits,
                                  const CVector& amplitudes) {
  check_capacity(num_qubits);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (amplitudes.size() != dim) {
    throw ArgumentError("amplitude vector has the wrong dimension");
  }
  const double norm = amplitudes.norm();
  if (norm <= 0.0) {
    throw ArgumentError("cannot normalize the zero vector");
  }
  const CVector v = amplitudes / norm;
  return DensityMatrix(num_qubits, v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::uint32_t num_qubits) {
  check_capacity(num_qubits);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  CMatrix m = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityMatrix(num_qubits, std::move(m));
}

DensityMatrix DensityMatrix::from_matrix(std::uint32_t num_qubits, CMatrix m,
                                         double tol) {
  check_capacity(num_qubits);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (m.rows() != dim || m.cols() != dim) {
    throw ArgumentError("matrix dimension does not match the qubit count");
  }
  DensityMatrix rho(num_qubits, std::move(m));
  if (!rho.is_valid(tol)) {
    throw NumericalError("matrix is not a valid density matrix");
  }
  return rho;
}

bool DensityMatrix::is_valid(double tol) const {
  if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(mat_.trace().real() - 1.0) > tol ||
      std::abs(mat_.trace().imag()) > tol) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat_,
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

NoiseChannelSpec NoiseChannelSpec::ideal() { return NoiseChannelSpec{}; }

NoiseChannelSpec NoiseChannelSpec::validation(double p_2q) {
  NoiseChannelSpec spec;
  spec.mode = Mode::kValidation;
  spec.p_2q = p_2q;
  return spec;
}

NoiseChannelSpec NoiseChannelSpec::device(const NoiseParameters& params,
                                          bool thermal) {
  params.validate();
  NoiseChannelSpec spec;
  spec.mode = Mode::kDevice;
  spec.p_1q = params.p_1q;
  spec.p_2q = params.p_2q;
  spec.thermal = thermal;
  spec.t1_us = params.t1_us;
  spec.t2_us = params.t2_us;
  spec.t_1q_us = params.t_1q_us;
  spec.t_2q_us = params.t_2q_us;
  return spec;
}

NoiseChannelSpec NoiseChannelSpec::validation_with_thermal(
    double p_2q, const NoiseParameters& params) {
  params.validate();
  NoiseChannelSpec spec = validation(p_2q);
  spec.thermal = true;
  spec.t1_us = params.t1_us;
  spec.t2_us = params.t2_us;
  spec.t_1q_us = params.t_1q_us;
  spec.t_2q_us = params.t_2q_us;
  return spec;
}

bool KrausChannel::is_cptp(double tol) const {
  if (ops.empty()) return false;
  CMatrix sum = CMatrix::Zero(ops.front().rows(), ops.front().cols());
  for (const CMatrix& k : ops) {
    sum += k.adjoint() * k;
  }
  return (sum - CMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() <=
         tol;
}

KrausChannel thermal_relaxation_channel(double t_us, double t1_us,
                                        double t2_us) {
  if (t1_us <= 0 || t2_us <= 0 || t2_us > 2.0 * t1_us + 1e-12) {
    throw ArgumentError("thermal channel requires 0 < t2 <= 2 t1");
  }
  const double gamma = 1.0 - std::exp(-t_us / t1_us);
  // Residual dephasing after amplitude damping so that coherences decay
  // as exp(-t/T2) overall.
  const double rate = 1.0 / t2_us - 0.5 / t1_us;
  const double lambda = 0.5 * (1.0 - std::exp(-t_us * rate));

  KrausChannel channel;
  CMatrix k0 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  CMatrix k1 = CMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  const double a = std::sqrt(1.0 - lambda);
  const double b = std::sqrt(lambda);
  CMatrix d0 = CMatrix::Zero(2, 2);
  d0(0, 0) = a;
  d0(1, 1) = a;
  CMatrix d1 = CMatrix::Zero(2, 2);
  d1(0, 0) = b;
  d1(1, 1) = -b;
  // Compose damping then dephasing into a single Kraus set.
  channel.ops = {d0 * k0, d0 * k1, d1 * k0, d1 * k1};
  return channel;
}

KrausChannel depolarizing_channel(double p, std::uint32_t num_qubits) {
  if (p < 0.0 || p > 1.0) {
    throw ArgumentError("depolarizing probability must lie in [0, 1]");
  }
  if (num_qubits == 0 || num_qubits > 2) {
    throw ArgumentError("Kraus construction supports 1 or 2 qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  const double d2 = static_cast<double>(dim) * static_cast<double>(dim);
  KrausChannel channel;
  const CMatrix x = gate_matrix(Gate::one(GateKind::kX, 0));
  const CMatrix z = gate_matrix(Gate::one(GateKind::kZ, 0));
  std::vector<CMatrix> paulis1 = {CMatrix::Identity(2, 2), x, kI * x * z, z};
  std::vector<CMatrix> basis;
  if (num_qubits == 1) {
    basis = paulis1;
  } else {
    for (const CMatrix& a : paulis1) {
      for (const CMatrix& b : paulis1) {
        CMatrix m(4, 4);
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            m.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
          }
        }
        basis.push_back(std::move(m));
      }
    }
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double w = i == 0 ? (1.0 - p) + p / d2 : p / d2;
    channel.ops.push_back(std::sqrt(w) * basis[i]);
  }
  return channel;
}

DensityMatrix apply_circuit(const DensityMatrix& rho, const Circuit& circuit,
                            const NoiseChannelSpec& noise) {
  if (circuit.num_qubits() != rho.num_qubits()) {
    throw ArgumentError("circuit register does not match the state width");
  }
  check_capacity(rho.num_qubits());
  const std::uint32_t n = rho.num_qubits();
  CMatrix m = rho.matrix();
  for (const Gate& g : circuit.gates()) {
    if (g.arity() == 1) {
      const std::uint32_t qs[1] = {g.q0};
      apply_operator(m, gate_matrix(g), qs, n);
    } else {
      const std::uint32_t qs[2] = {g.q0, g.q1};
      apply_operator(m, gate_matrix(g), qs, n);
    }
    const bool entangling = is_two_qubit(g.kind);
    const int events = g.kind == GateKind::kSWAP ? 3 : 1;
    switch (noise.mode) {
      case NoiseChannelSpec::Mode::kIdeal:
        break;
      case NoiseChannelSpec::Mode::kValidation:
        if (entangling) {
          std::vector<std::uint32_t> all(n);
          for (std::uint32_t q = 0; q < n; ++q) all[q] = q;
          for (int e = 0; e < events; ++e) {
            apply_depolarizing(m, noise.p_2q, all, n);
          }
        }
        break;
      case NoiseChannelSpec::Mode::kDevice:
        if (entangling) {
          const std::uint32_t qs[2] = {g.q0, g.q1};
          for (int e = 0; e < events; ++e) {
            apply_depolarizing(m, noise.p_2q, qs, n);
          }
        } else {
          const std::uint32_t qs[1] = {g.q0};
          apply_depolarizing(m, noise.p_1q, qs, n);
        }
        break;
    }
    if (noise.thermal) {
      apply_thermal_all(m, entangling ? noise.t_2q_us : noise.t_1q_us, noise,
                        n);
    }
  }
  return DensityMatrix(rho.num_qubits(), std::move(m));
}

double expectation(const DensityMatrix& rho, const PauliString& p) {
  if (p.num_qubits() != rho.num_qubits()) {
    throw ArgumentError("Pauli width does not match the state");
  }
  const std::uint32_t n = rho.num_qubits();
  const std::uint64_t xm = qubit_mask_to_index_mask(p.x_bits(), n);
  const std::uint64_t zm = qubit_mask_to_index_mask(p.z_bits(), n);
  const int ny = std::popcount(p.x_bits() & p.z_bits());
  const std::uint64_t dim = std::uint64_t{1} << n;
  Complex acc = 0;
  for (std::uint64_t j = 0; j < dim; ++j) {
    const double sign = std::popcount(j & zm) & 1 ? -1.0 : 1.0;
    acc += sign * rho.matrix()(static_cast<Eigen::Index>(j),
                               static_cast<Eigen::Index>(j ^ xm));
  }
  // i^ny
  switch (ny & 3) {
    case 1:
      acc *= kI;
      break;
    case 2:
      acc = -acc;
      break;
    case 3:
      acc *= -kI;
      break;
    default:
      break;
  }
  if (std::abs(acc.imag()) > 1e-9) {
    throw NumericalError("expectation has a complex residue of " +
                         std::to_string(acc.imag()));
  }
  return acc.real();
}

double z_expectation(const DensityMatrix& rho, const SignedPauli& zform) {
  if (!zform.is_z_type()) {
    throw ArgumentError("z_expectation requires a Z/I-only operator");
  }
  return zform.sign * expectation(rho, zform.pauli);
}

double state_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ArgumentError("fidelity arguments differ in width");
  }
  if (a.is_pure() || b.is_pure()) {
    const double f = (a.matrix() * b.matrix()).trace().real();
    return std::clamp(f, 0.0, 1.0);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> root_solver(a.matrix());
  if (root_solver.eigenvalues().minCoeff() < -1e-9) {
    throw NumericalError("fidelity input is not positive semi-definite");
  }
  const CMatrix sqrt_a =
      root_solver.eigenvectors() *
      root_solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
      root_solver.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> inner(sqrt_a * b.matrix() * sqrt_a,
                                               Eigen::EigenvaluesOnly);
  const double sum = inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(sum * sum, 0.0, 1.0);
}

CVector random_state_vector(std::uint32_t num_qubits, std::uint64_t seed) {
  check_capacity(num_qubits);
  auto rng = make_engine(seed);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

DensityMatrix random_pure_state(std::uint32_t num_qubits, std::uint64_t seed) {
  return DensityMatrix::pure(num_qubits, random_state_vector(num_qubits, seed));
}

CMatrix pauli_matrix(const PauliString& p) {
  const std::uint32_t n = p.num_qubits();
  if (n > DensityMatrix::kMaxQubits) {
    throw CapacityError("dense Pauli matrix capped at 10 qubits");
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t xm = qubit_mask_to_index_mask(p.x_bits(), n);
  const std::uint64_t zm = qubit_mask_to_index_mask(p.z_bits(), n);
  const int ny = std::popcount(p.x_bits() & p.z_bits());
  Complex phase = 1.0;
  switch (ny & 3) {
    case 1:
      phase = kI;
      break;
    case 2:
      phase = -1.0;
      break;
    case 3:
      phase = -kI;
      break;
    default:
      break;
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::uint64_t j = 0; j < dim; ++j) {
    const double sign = std::popcount(j & zm) & 1 ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(j ^ xm), static_cast<Eigen::Index>(j)) =
        phase * sign;
  }
  return m;
}

DensityMatrix ground_state(const WeightedObservable& observable) {
  const std::uint32_t n = observable.num_qubits();
  check_capacity(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (const Term& t : observable.terms()) {
    h += t.coeff * pauli_matrix(t.pauli);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  Eigen::Index lowest = 0;
  solver.eigenvalues().minCoeff(&lowest);
  return DensityMatrix::pure(n, solver.eigenvectors().col(lowest));
}

}  // namespace measkit
