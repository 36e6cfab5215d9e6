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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "measkit/circuit.hpp"
#include "measkit/device.hpp"
#include "measkit/pauli.hpp"

namespace measkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Exact 2^N x 2^N density matrix, capped at 10 qubits. Basis index bit
/// (N-1-q) holds qubit q, so qubit 0 is the most significant bit,
/// matching the left-to-right text form of Pauli strings.
class DensityMatrix {
 public:
  static constexpr std::uint32_t kMaxQubits = 10;

  /// |0...0><0...0|.
  explicit DensityMatrix(std::uint32_t num_qubits);

  static DensityMatrix pure(std::uint32_t num_qubits, const CVector& amplitudes);
  static DensityMatrix maximally_mixed(std::uint32_t num_qubits);
  /// Validates Hermiticity, unit trace, and positive semi-definiteness.
  static DensityMatrix from_matrix(std::uint32_t num_qubits, CMatrix m,
                                   double tol = 1e-9);

  std::uint32_t num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const CMatrix& matrix() const { return mat_; }

  double trace_real() const { return mat_.trace().real(); }
  double purity() const { return mat_.squaredNorm(); }
  bool is_pure(double tol = 1e-9) const { return std::abs(purity() - 1.0) <= tol; }

  /// Hermitian / trace-one / PSD check, eigenvalues above -tol.
  bool is_valid(double tol = 1e-9) const;

 private:
  DensityMatrix(std::uint32_t num_qubits, CMatrix mat)
      : num_qubits_(num_qubits), mat_(std::move(mat)) {}

  std::uint32_t num_qubits_ = 0;
  CMatrix mat_;

  friend DensityMatrix apply_circuit(const DensityMatrix&, const Circuit&,
                                     const struct NoiseChannelSpec&);
};

/// Per-gate noise description.
///
/// Validation mode reproduces the analytic global model: one N-qubit
/// depolarizing event of strength p_2q after every entangling gate and
/// nothing else, so grouped expectations contract by exactly
/// (1-p)^{n_2q}. Device mode applies local depolarizing channels on the
/// operands of every gate (p_1q / p_2q). Thermal relaxation, when
/// enabled, additionally damps every qubit for the gate's duration.
struct NoiseChannelSpec {
  enum class Mode { kIdeal, kValidation, kDevice };

  Mode mode = Mode::kIdeal;
  double p_1q = 0.0;
  double p_2q = 0.0;
  bool thermal = false;
  double t1_us = 1.0;
  double t2_us = 1.0;
  double t_1q_us = 0.0;
  double t_2q_us = 0.0;

  static NoiseChannelSpec ideal();
  static NoiseChannelSpec validation(double p_2q);
  static NoiseChannelSpec device(const NoiseParameters& params,
                                 bool thermal = true);
  /// Validation depolarizing with thermal relaxation stacked on top.
  static NoiseChannelSpec validation_with_thermal(double p_2q,
                                                  const NoiseParameters& params);
};

/// Kraus operators acting on a small subsystem.
struct KrausChannel {
  std::vector<CMatrix> ops;
  bool is_cptp(double tol = 1e-10) const;
};

/// Amplitude damping composed with pure dephasing so populations decay
/// with T1 and coherences with T2 over duration t_us. Requires
/// t2 <= 2 t1.
KrausChannel thermal_relaxation_channel(double t_us, double t1_us, double t2_us);

/// Replaces the k-qubit subsystem with the maximally mixed state with
/// probability p.
KrausChannel depolarizing_channel(double p, std::uint32_t num_qubits);

/// Runs the circuit gate by gate, following each gate with its noise
/// channel per the spec. Throws CapacityError above kMaxQubits.
DensityMatrix apply_circuit(const DensityMatrix& rho, const Circuit& circuit,
                            const NoiseChannelSpec& noise);

/// Tr[P rho]; throws NumericalError if the imaginary residue exceeds 1e-9.
double expectation(const DensityMatrix& rho, const PauliString& p);

/// Tr[Z~ rho] for a conjugated, signed Z-type operator.
double z_expectation(const DensityMatrix& rho, const SignedPauli& zform);

/// Uhlmann fidelity; uses the <psi|rho|psi> shortcut when either state
/// is pure and the matrix-square-root formula otherwise.
double state_fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Haar-random pure state as a density matrix; deterministic per seed.
DensityMatrix random_pure_state(std::uint32_t num_qubits, std::uint64_t seed);
CVector random_state_vector(std::uint32_t num_qubits, std::uint64_t seed);

/// Lowest-eigenvalue eigenvector of sum_i c_i P_i as a pure state.
DensityMatrix ground_state(const WeightedObservable& observable);

/// Dense matrix of a Pauli string under this module's bit convention.
CMatrix pauli_matrix(const PauliString& p);

}  // namespace measkit
