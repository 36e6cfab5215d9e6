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

#include "measkit/sweep.hpp"

#include <cmath>

#include "measkit/rng.hpp"

namespace measkit {

namespace {

void finalize_cell(SweepCell& cell) {
  if (cell.values.empty()) return;
  double sum = 0.0;
  for (double v : cell.values) sum += v;
  cell.mean = sum / static_cast<double>(cell.values.size());
  double sq = 0.0;
  for (double v : cell.values) sq += (v - cell.mean) * (v - cell.mean);
  cell.stddev = std::sqrt(sq / static_cast<double>(cell.values.size()));
}

std::uint64_t cell_seed(std::uint64_t seed, std::uint32_t degree, double ratio,
                        std::uint32_t trial) {
  std::uint64_t ratio_bits;
  static_assert(sizeof(ratio_bits) == sizeof(ratio));
  std::memcpy(&ratio_bits, &ratio, sizeof(ratio));
  return substream(seed, "sweep-cell", {degree, ratio_bits, trial});
}

DeviceModel cell_device(const DeviceModel& base, std::uint32_t num_qubits,
                        std::uint32_t degree, double ratio,
                        std::uint64_t graph_seed) {
  return DeviceModel{
      base.name + "-d" + std::to_string(degree),
      generate_topology(TopologyKind::kRandomRegular, num_qubits, degree,
                        graph_seed),
      scale_noise(base.noise, ratio)};
}

std::vector<MeasurementGroup> group_and_synthesize(
    const WeightedObservable& observable, const GroupingContext& context) {
  GalicKernel kernel;
  std::vector<MeasurementGroup> groups =
      sorted_insertion(observable, kernel, context);
  for (MeasurementGroup& g : groups) {
    synthesize_group(g, context);
  }
  return groups;
}

}  // namespace

SweepGrid run_variance_sweep(const WeightedObservable& observable,
                             const DeviceModel& base_device,
                             std::span<const std::uint32_t> degrees,
                             std::span<const double> ratios,
                             double epsilon_target, std::uint32_t num_states,
                             std::uint64_t seed, unsigned threads) {
  const std::uint32_t n = observable.num_qubits();
  SweepGrid grid;
  grid.metric = "sample_variance";
  grid.degrees.assign(degrees.begin(), degrees.end());
  grid.ratios.assign(ratios.begin(), ratios.end());
  grid.trials_per_cell = num_states;
  grid.seed = seed;
  grid.cells.resize(grid.degrees.size() * grid.ratios.size());

  std::vector<DensityMatrix> states;
  states.reserve(num_states);
  for (std::uint32_t t = 0; t < num_states; ++t) {
    states.push_back(random_pure_state(n, substream(seed, "state", {t})));
  }

  for (std::size_t di = 0; di < grid.degrees.size(); ++di) {
    for (std::size_t ri = 0; ri < grid.ratios.size(); ++ri) {
      SweepCell& cell = grid.cell(di, ri);
      for (std::uint32_t t = 0; t < num_states; ++t) {
        const std::uint64_t gseed =
            cell_seed(seed, grid.degrees[di], grid.ratios[ri], t);
        GroupingContext context{
            cell_device(base_device, n, grid.degrees[di], grid.ratios[ri],
                        gseed),
            epsilon_target};
        const std::vector<MeasurementGroup> groups =
            group_and_synthesize(observable, context);
        const NoiseChannelSpec noise =
            NoiseChannelSpec::device(context.device->noise);
        const EstimatorReport report =
            run_estimation(groups, states[t], noise, {}, {}, threads);
        cell.values.push_back(report.sample_variance);
      }
      finalize_cell(cell);
    }
  }
  return grid;
}

SweepGrid run_bias_sweep(const Circuit& ansatz,
                         const WeightedObservable& observable,
                         const DeviceModel& base_device,
                         std::span<const std::uint32_t> degrees,
                         std::span<const double> ratios, double epsilon_target,
                         std::uint32_t trials, std::uint64_t seed,
                         unsigned threads) {
  const std::uint32_t n = observable.num_qubits();
  if (ansatz.num_qubits() != n) {
    throw ArgumentError("ansatz register does not match the observable");
  }
  SweepGrid grid;
  grid.metric = "bias";
  grid.degrees.assign(degrees.begin(), degrees.end());
  grid.ratios.assign(ratios.begin(), ratios.end());
  grid.trials_per_cell = trials;
  grid.seed = seed;
  grid.cells.resize(grid.degrees.size() * grid.ratios.size());

  // Ideal reference: noiseless ansatz from |0...0>.
  const DensityMatrix zero(n);
  const DensityMatrix ideal_state =
      apply_circuit(zero, ansatz, NoiseChannelSpec::ideal());
  double ideal_value = 0.0;
  for (const Term& t : observable.terms()) {
    ideal_value += t.coeff * expectation(ideal_state, t.pauli);
  }

  for (std::size_t di = 0; di < grid.degrees.size(); ++di) {
    for (std::size_t ri = 0; ri < grid.ratios.size(); ++ri) {
      SweepCell& cell = grid.cell(di, ri);
      for (std::uint32_t t = 0; t < trials; ++t) {
        const std::uint64_t gseed =
            cell_seed(seed, grid.degrees[di], grid.ratios[ri], t);
        GroupingContext context{
            cell_device(base_device, n, grid.degrees[di], grid.ratios[ri],
                        gseed),
            epsilon_target};
        const NoiseChannelSpec noise =
            NoiseChannelSpec::device(context.device->noise);
        // Route the ansatz onto the cell topology and prepare noisily.
        const RoutedCircuit routed_ansatz = route(ansatz, context.device->graph);
        const DensityMatrix prepared =
            apply_circuit(zero, routed_ansatz.circuit, noise);
        // Measure the permuted observable through galic groups.
        std::vector<Term> permuted;
        permuted.reserve(observable.size());
        for (const Term& term : observable.terms()) {
          std::uint64_t x = 0, z = 0;
          for (std::uint32_t q = 0; q < n; ++q) {
            const std::uint32_t w = routed_ansatz.final_permutation[q];
            if ((term.pauli.x_bits() >> q) & 1) x |= std::uint64_t{1} << w;
            if ((term.pauli.z_bits() >> q) & 1) z |= std::uint64_t{1} << w;
          }
          permuted.push_back({term.coeff, PauliString(n, x, z)});
        }
        const WeightedObservable cell_observable(n, std::move(permuted));
        const std::vector<MeasurementGroup> groups =
            group_and_synthesize(cell_observable, context);
        const EstimatorReport report =
            run_estimation(groups, prepared, noise, {}, {}, threads);
        cell.values.push_back(report.estimator_value - ideal_value);
      }
      finalize_cell(cell);
    }
  }
  return grid;
}

namespace {

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double pearson = 0.0;
  bool pearson_defined = true;
};

Fit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw ArgumentError("regression requires at least two distinct x values");
  }
  Fit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += r * r;
    }
    const double sigma2 = ss_res / static_cast<double>(n - 2);
    fit.slope_se = std::sqrt(sigma2 / sxx);
    fit.intercept_se = std::sqrt(sigma2 * (1.0 / n + mx * mx / sxx));
  }
  if (syy == 0.0) {
    fit.pearson = 0.0;
    fit.pearson_defined = false;
  } else {
    fit.pearson = sxy / std::sqrt(sxx * syy);
  }
  return fit;
}

}  // namespace

RegressionSummary regress(const SweepGrid& grid) {
  if (grid.degrees.size() < 2 || grid.ratios.size() < 2) {
    throw ArgumentError("regression needs at least two degrees and two ratios");
  }
  RegressionSummary summary;

  // metric vs log10(ratio), fit per degree row, averaged.
  std::vector<double> log_ratios;
  for (double r : grid.ratios) log_ratios.push_back(std::log10(r));
  std::size_t fits = 0;
  for (std::size_t di = 0; di < grid.degrees.size(); ++di) {
    std::vector<double> y;
    for (std::size_t ri = 0; ri < grid.ratios.size(); ++ri) {
      y.push_back(grid.cell(di, ri).mean);
    }
    const Fit fit = least_squares(log_ratios, y);
    summary.alpha_r += fit.slope;
    summary.beta_r += fit.intercept;
    summary.alpha_r_se += fit.slope_se;
    summary.beta_r_se += fit.intercept_se;
    summary.pearson_r += fit.pearson;
    summary.pearson_r_defined = summary.pearson_r_defined && fit.pearson_defined;
    ++fits;
  }
  summary.alpha_r /= fits;
  summary.beta_r /= fits;
  summary.alpha_r_se /= fits;
  summary.beta_r_se /= fits;
  summary.pearson_r /= fits;

  // metric vs degree, fit per ratio column, averaged.
  std::vector<double> degree_x;
  for (std::uint32_t d : grid.degrees) degree_x.push_back(d);
  fits = 0;
  summary.pearson_d_defined = true;
  for (std::size_t ri = 0; ri < grid.ratios.size(); ++ri) {
    std::vector<double> y;
    for (std::size_t di = 0; di < grid.degrees.size(); ++di) {
      y.push_back(grid.cell(di, ri).mean);
    }
    const Fit fit = least_squares(degree_x, y);
    summary.alpha_d += fit.slope;
    summary.beta_d += fit.intercept;
    summary.alpha_d_se += fit.slope_se;
    summary.beta_d_se += fit.intercept_se;
    summary.pearson_d += fit.pearson;
    summary.pearson_d_defined = summary.pearson_d_defined && fit.pearson_defined;
    ++fits;
  }
  summary.alpha_d /= fits;
  summary.beta_d /= fits;
  summary.alpha_d_se /= fits;
  summary.beta_d_se /= fits;
  summary.pearson_d /= fits;

  return summary;
}

}  // namespace measkit
