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
#include <vector>

#include "measkit/estimation.hpp"

namespace measkit {

struct SweepCell {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> values;  // one per trial
};

/// Connectivity-degree x noise-reduction grid of a scalar metric, with
/// per-cell trial values. Cells are row-major: degrees index rows,
/// ratios index columns.
struct SweepGrid {
  std::string metric;
  std::vector<std::uint32_t> degrees;
  std::vector<double> ratios;
  std::uint32_t trials_per_cell = 0;
  std::uint64_t seed = 0;
  std::vector<SweepCell> cells;

  const SweepCell& cell(std::size_t degree_idx, std::size_t ratio_idx) const {
    return cells[degree_idx * ratios.size() + ratio_idx];
  }
  SweepCell& cell(std::size_t degree_idx, std::size_t ratio_idx) {
    return cells[degree_idx * ratios.size() + ratio_idx];
  }
};

struct RegressionSummary {
  double alpha_d = 0.0, beta_d = 0.0;   // metric vs degree
  double alpha_r = 0.0, beta_r = 0.0;   // metric vs log10(ratio)
  double alpha_d_se = 0.0, beta_d_se = 0.0;
  double alpha_r_se = 0.0, beta_r_se = 0.0;
  double pearson_d = 0.0, pearson_r = 0.0;
  bool pearson_d_defined = true;        // false when the metric is constant
  bool pearson_r_defined = true;
};

/// For each (degree, ratio) cell: build a random-regular device with the
/// base preset's noise scaled by the ratio, group with galic, synthesize
/// and route, and average the sample variance (sum_l sqrt Var)^2 over
/// `num_states` Haar-random trial states. Graph seeds derive from
/// (seed, degree, ratio, trial); trial states are shared across cells.
SweepGrid run_variance_sweep(const WeightedObservable& observable,
                             const DeviceModel& base_device,
                             std::span<const std::uint32_t> degrees,
                             std::span<const double> ratios,
                             double epsilon_target, std::uint32_t num_states,
                             std::uint64_t seed, unsigned threads = 1);

/// Same grid, but the trial state is prepared by simulating the ansatz
/// under the cell's scaled noise; the metric is the estimator bias
/// relative to the ansatz's ideal expectation value.
SweepGrid run_bias_sweep(const Circuit& ansatz,
                         const WeightedObservable& observable,
                         const DeviceModel& base_device,
                         std::span<const std::uint32_t> degrees,
                         std::span<const double> ratios, double epsilon_target,
                         std::uint32_t trials, std::uint64_t seed,
                         unsigned threads = 1);

/// Ordinary least squares per grid row (vs log10 ratio) and per column
/// (vs degree), slopes/intercepts/standard errors averaged across fits;
/// Pearson coefficients likewise. Throws on degenerate x axes; constant
/// metrics flag the Pearson coefficient as undefined and report 0.
RegressionSummary regress(const SweepGrid& grid);

}  // namespace measkit
