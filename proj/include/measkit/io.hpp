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

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "measkit/estimation.hpp"
#include "measkit/grouping.hpp"
#include "measkit/sweep.hpp"

namespace measkit {

using Json = nlohmann::json;

// Observable file: {"num_qubits": N, "terms": [{"pauli": "XXYY",
// "coeff": -0.245}, ...]}. Duplicate merges and dropped below-floor
// terms are reported on `warnings` when given.
WeightedObservable observable_from_json(const Json& j,
                                        std::ostream* warnings = nullptr);
Json observable_to_json(const WeightedObservable& observable);
WeightedObservable load_observable(const std::string& path,
                                   std::ostream* warnings = nullptr);

// Device file: {"name": ..., "num_qubits": N, "edges": [[i,j],...],
// "noise": {"p_1q": ..., "p_2q": ..., "t1_us": ..., "t2_us": ...,
// "t_1q_us": ..., "t_2q_us": ...}}.
DeviceModel device_from_json(const Json& j);
Json device_to_json(const DeviceModel& device);
/// Accepts a preset name (instantiated at num_qubits) or a JSON path.
DeviceModel load_device(const std::string& name_or_path,
                        std::uint32_t num_qubits);

// Circuit file: {"num_qubits": N, "gates": [["H",0],["CZ",0,1],
// ["RX",0,0.5],...], "n_2q": k, "depth": d, "final_permutation": [...]}.
// Gate entries and num_qubits are read back; stats are advisory output.
Circuit circuit_from_json(const Json& j);
Json circuit_to_json(const Circuit& circuit,
                     const std::vector<std::uint32_t>* final_permutation = nullptr);
Circuit load_circuit(const std::string& path);

Json groups_to_json(std::span<const MeasurementGroup> groups,
                    std::string_view kernel, const GroupingContext& context);

Json report_to_json(const EstimatorReport& report, std::string_view kernel,
                    std::string_view device, double unit_scale,
                    std::string_view units);

Json allocation_to_json(const ShotAllocation& allocation);

Json regression_to_json(const RegressionSummary& summary);

/// Rows: degree,ratio,trial,metric,value with round-trip-exact floats.
std::string sweep_to_csv(const SweepGrid& grid);
Json sweep_summary_to_json(const SweepGrid& grid, const RegressionSummary& summary);

/// Binary state dump: one JSON header line {"num_qubits": N, "layout":
/// "row-major", "dtype": "complex64"} followed by 4^N little-endian
/// float32 (re, im) pairs.
void save_state(const DensityMatrix& rho, const std::string& path);
DensityMatrix load_state(const std::string& path);

/// Shortest decimal string that parses back to exactly this double.
std::string format_double(double value);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace measkit
