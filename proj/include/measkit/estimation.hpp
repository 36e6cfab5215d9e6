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
#include <optional>
#include <span>
#include <vector>

#include "measkit/grouping.hpp"
#include "measkit/sim.hpp"

namespace measkit {

constexpr double kKcalPerHartree = 627.509;

/// Forward relative-error model: eps = 1 - (1-p)^{n_2q}.
double relative_error_bound(double p, int n_2q);
/// Inverse: the real-valued two-qubit-gate budget
/// ln(1-eps_target) / ln(1-p).
double invert_error_bound(double p, double epsilon_target);

/// Var[O] = sum_{j,k} c_j c_k (Tr[P_k P_j rho] - Tr[P_j rho] Tr[P_k rho])
/// over the given weighted members, evaluated on `rho`. Pauli products
/// are formed symplectically; commuting members make each product
/// Hermitian up to a real sign, which is asserted. Clamped at zero.
double variance_of_terms(const DensityMatrix& rho,
                         std::span<const double> coeffs,
                         std::span<const PauliString> paulis);
double variance_of_terms(const DensityMatrix& rho,
                         std::span<const double> coeffs,
                         std::span<const SignedPauli> zforms);

/// Variance of the group estimator on the post-measurement-circuit
/// state: uses the conjugated measured forms when the group has been
/// synthesized, the raw members otherwise.
double group_variance(const DensityMatrix& rho_tilde,
                      const MeasurementGroup& group);

struct ShotAllocation {
  std::vector<double> fractional;   // proportional to sqrt(Var)
  std::vector<long long> shots;     // largest-remainder rounding
  double total = 0.0;               // requested budget or computed n^eps
  bool all_zero = false;            // degenerate all-zero-variance input
};

/// Minimal-variance split of a fixed budget: n_i = n sqrt(V_i)/sum sqrt(V_j).
ShotAllocation allocate_shots_budget(std::span<const double> variances,
                                     double budget);
/// Fixed-precision form: total n^eps = (sum sqrt(V_j))^2 / eps^2 with the
/// same proportions.
ShotAllocation allocate_shots_target(std::span<const double> variances,
                                     double epsilon);

/// Per-group simulation products for one trial state.
struct GroupMeasurement {
  std::vector<double> noisy;   // Tr[P~ rho~] per member
  std::vector<double> ideal;   // Tr[P rho] per member
  double variance = 0.0;       // Var[O] on rho~
  int n_2q = 0;
  int depth = 0;
};

/// Applies the group's routed circuit to `rho` under `noise` and
/// evaluates every member both ways. Requires a synthesized group.
GroupMeasurement measure_group(const DensityMatrix& rho,
                               const MeasurementGroup& group,
                               const NoiseChannelSpec& noise);

/// Tr[P rho~] for every member of the group: the group's noisy
/// measurement circuit runs once and each conjugated Z-form is read off
/// the evolved state.
std::vector<double> grouped_expectations(const DensityMatrix& rho,
                                         const MeasurementGroup& group,
                                         const NoiseChannelSpec& noise);

struct BiasReport {
  std::vector<double> per_group;
  double total = 0.0;
};

BiasReport bias_report(std::span<const GroupMeasurement> measurements,
                       std::span<const MeasurementGroup> groups);

struct EstimatorReport {
  std::vector<double> group_variances;
  std::vector<double> group_biases;
  std::vector<int> group_n_2q;
  std::vector<int> group_depths;
  double total_bias = 0.0;
  double sample_variance = 0.0;    // (sum_l sqrt Var[O_l])^2
  double estimator_value = 0.0;    // noisy expectation of the estimator
  double ideal_value = 0.0;        // sum_i c_i Tr[P_i rho]
  std::optional<ShotAllocation> allocation;
};

/// Full estimator characterization across synthesized groups. When a
/// budget or precision target is given the induced allocation and its
/// MSE become available.
EstimatorReport run_estimation(std::span<const MeasurementGroup> groups,
                               const DensityMatrix& rho,
                               const NoiseChannelSpec& noise,
                               std::optional<double> shot_budget = {},
                               std::optional<double> precision = {},
                               unsigned threads = 1);

/// bias^2 + sum_l Var_l / n_l; infinity when some n_l = 0 with Var_l > 0.
double mse(const EstimatorReport& report, const ShotAllocation& allocation);

}  // namespace measkit
