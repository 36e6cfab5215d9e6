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

#include "measkit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace measkit {

namespace {

double require_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ParseError(std::string("missing or non-numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

std::uint32_t require_uint(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() ||
      j[key].get<long long>() < 0) {
    throw ParseError(std::string("missing or non-negative-integer field '") +
                     key + "'");
  }
  return j[key].get<std::uint32_t>();
}

}  // namespace

std::string format_double(double value) {
  for (int precision = 1; precision <= 17; ++precision) {
    std::ostringstream out;
    out.precision(precision);
    out << value;
    double parsed = 0.0;
    const std::string text = out.str();
    std::istringstream(text) >> parsed;
    if (parsed == value) return text;
  }
  return std::to_string(value);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("JSON parse failure in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot write '" + path + "'");
  }
  out << text;
}

WeightedObservable observable_from_json(const Json& j, std::ostream* warnings) {
  const std::uint32_t n = require_uint(j, "num_qubits");
  if (!j.contains("terms") || !j["terms"].is_array()) {
    throw ParseError("observable needs a 'terms' array");
  }
  std::vector<Term> terms;
  std::size_t index = 0;
  for (const Json& entry : j["terms"]) {
    if (!entry.contains("pauli") || !entry["pauli"].is_string()) {
      throw ParseError("term " + std::to_string(index) + " lacks a pauli string");
    }
    if (!entry.contains("coeff") || !entry["coeff"].is_number()) {
      throw ParseError("term " + std::to_string(index) +
                       " lacks a numeric coefficient");
    }
    const double coeff = entry["coeff"].get<double>();
    try {
      terms.push_back({coeff, parse_pauli(entry["pauli"].get<std::string>(), n)});
    } catch (const ParseError& e) {
      throw ParseError("term " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  WeightedObservable observable(n, std::move(terms));
  if (warnings != nullptr) {
    if (observable.merged_terms() > 0) {
      *warnings << "warning: merged " << observable.merged_terms()
                << " duplicate Pauli term(s)\n";
    }
    if (observable.dropped_terms() > 0) {
      *warnings << "warning: dropped " << observable.dropped_terms()
                << " term(s) below |coeff| < " << WeightedObservable::kCoeffFloor
                << "\n";
    }
  }
  return observable;
}

Json observable_to_json(const WeightedObservable& observable) {
  Json terms = Json::array();
  for (const Term& t : observable.terms()) {
    terms.push_back({{"pauli", render_pauli(t.pauli)}, {"coeff", t.coeff}});
  }
  return Json{{"num_qubits", observable.num_qubits()}, {"terms", terms}};
}

WeightedObservable load_observable(const std::string& path,
                                   std::ostream* warnings) {
  return observable_from_json(read_json_file(path), warnings);
}

DeviceModel device_from_json(const Json& j) {
  if (!j.contains("name") || !j["name"].is_string()) {
    throw ParseError("device needs a 'name'");
  }
  const std::uint32_t n = require_uint(j, "num_qubits");
  if (!j.contains("edges") || !j["edges"].is_array()) {
    throw ParseError("device needs an 'edges' array");
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const Json& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) {
      throw ParseError("each edge must be a two-element array");
    }
    edges.push_back({e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>()});
  }
  if (!j.contains("noise") || !j["noise"].is_object()) {
    throw ParseError("device needs a 'noise' object");
  }
  const Json& noise_json = j["noise"];
  NoiseParameters noise{
      require_number(noise_json, "p_1q"),   require_number(noise_json, "p_2q"),
      require_number(noise_json, "t1_us"),  require_number(noise_json, "t2_us"),
      require_number(noise_json, "t_1q_us"), require_number(noise_json, "t_2q_us")};
  noise.validate();
  return DeviceModel{j["name"].get<std::string>(), CouplingGraph(n, std::move(edges)),
                     noise};
}

Json device_to_json(const DeviceModel& device) {
  Json edges = Json::array();
  for (auto [a, b] : device.graph.edges()) {
    edges.push_back({a, b});
  }
  return Json{{"name", device.name},
              {"num_qubits", device.graph.num_qubits()},
              {"edges", edges},
              {"noise",
               {{"p_1q", device.noise.p_1q},
                {"p_2q", device.noise.p_2q},
                {"t1_us", device.noise.t1_us},
                {"t2_us", device.noise.t2_us},
                {"t_1q_us", device.noise.t_1q_us},
                {"t_2q_us", device.noise.t_2q_us}}}};
}

DeviceModel load_device(const std::string& name_or_path,
                        std::uint32_t num_qubits) {
  const auto names = device_preset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return device_preset(name_or_path, num_qubits);
  }
  return device_from_json(read_json_file(name_or_path));
}

Circuit circuit_from_json(const Json& j) {
  const std::uint32_t n = require_uint(j, "num_qubits");
  if (!j.contains("gates") || !j["gates"].is_array()) {
    throw ParseError("circuit needs a 'gates' array");
  }
  Circuit circuit(n);
  std::size_t index = 0;
  for (const Json& g : j["gates"]) {
    if (!g.is_array() || g.empty() || !g[0].is_string()) {
      throw ParseError("gate " + std::to_string(index) + " is malformed");
    }
    const GateKind kind = gate_from_name(g[0].get<std::string>());
    try {
      if (is_two_qubit(kind)) {
        if (g.size() != 3) {
          throw ParseError("expected [name, a, b]");
        }
        circuit.push_two(kind, g[1].get<std::uint32_t>(), g[2].get<std::uint32_t>());
      } else if (is_rotation(kind)) {
        if (g.size() != 3) {
          throw ParseError("expected [name, qubit, angle]");
        }
        circuit.push(Gate::rotation(kind, g[1].get<std::uint32_t>(),
                                    g[2].get<double>()));
      } else {
        if (g.size() != 2) {
          throw ParseError("expected [name, qubit]");
        }
        circuit.push_one(kind, g[1].get<std::uint32_t>());
      }
    } catch (const std::exception& e) {
      throw ParseError("gate " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  return circuit;
}

Json circuit_to_json(const Circuit& circuit,
                     const std::vector<std::uint32_t>* final_permutation) {
  Json gates = Json::array();
  for (const Gate& g : circuit.gates()) {
    Json entry = Json::array();
    entry.push_back(std::string(gate_name(g.kind)));
    entry.push_back(g.q0);
    if (g.arity() == 2) {
      entry.push_back(g.q1);
    } else if (is_rotation(g.kind)) {
      entry.push_back(g.angle);
    }
    gates.push_back(std::move(entry));
  }
  Json out{{"num_qubits", circuit.num_qubits()},
           {"gates", gates},
           {"n_2q", circuit.two_qubit_count()},
           {"depth", circuit.depth()}};
  if (final_permutation != nullptr) {
    out["final_permutation"] = *final_permutation;
  }
  return out;
}

Circuit load_circuit(const std::string& path) {
  return circuit_from_json(read_json_file(path));
}

Json groups_to_json(std::span<const MeasurementGroup> groups,
                    std::string_view kernel, const GroupingContext& context) {
  Json out;
  out["kernel"] = std::string(kernel);
  if (context.epsilon_target) {
    out["epsilon_target"] = *context.epsilon_target;
  }
  if (context.device) {
    out["device"] = context.device->name;
  }
  Json arr = Json::array();
  for (const MeasurementGroup& g : groups) {
    Json entry;
    Json paulis = Json::array();
    for (const PauliString& p : g.paulis) {
      paulis.push_back(render_pauli(p));
    }
    entry["paulis"] = std::move(paulis);
    entry["coeffs"] = g.coeffs;
    if (g.routed_circuit) {
      const GateStats stats = gate_stats(*g.routed_circuit);
      entry["n_2q"] = stats.n_2q;
      entry["depth"] = stats.depth;
    }
    if (g.assigned_shots) {
      entry["shots"] = *g.assigned_shots;
    }
    arr.push_back(std::move(entry));
  }
  out["groups"] = std::move(arr);
  return out;
}

Json report_to_json(const EstimatorReport& report, std::string_view kernel,
                    std::string_view device, double unit_scale,
                    std::string_view units) {
  Json per_group = Json::array();
  for (std::size_t l = 0; l < report.group_variances.size(); ++l) {
    Json entry{{"variance", report.group_variances[l] * unit_scale * unit_scale},
               {"bias", report.group_biases[l] * unit_scale},
               {"n_2q", report.group_n_2q[l]},
               {"depth", report.group_depths[l]}};
    if (report.allocation && !report.allocation->all_zero) {
      entry["shots"] = report.allocation->shots[l];
    }
    per_group.push_back(std::move(entry));
  }
  Json out{{"kernel", std::string(kernel)},
           {"device", std::string(device)},
           {"units", std::string(units)},
           {"bias", report.total_bias * unit_scale},
           {"sample_variance", report.sample_variance * unit_scale * unit_scale},
           {"estimator_value", report.estimator_value * unit_scale},
           {"ideal_value", report.ideal_value * unit_scale},
           {"groups", report.group_variances.size()},
           {"per_group", std::move(per_group)}};
  if (report.allocation) {
    out["allocation"] = allocation_to_json(*report.allocation);
    out["mse"] = mse(report, *report.allocation) * unit_scale * unit_scale;
  }
  return out;
}

Json allocation_to_json(const ShotAllocation& allocation) {
  return Json{{"total", allocation.total},
              {"fractional", allocation.fractional},
              {"shots", allocation.shots},
              {"all_zero", allocation.all_zero}};
}

Json regression_to_json(const RegressionSummary& summary) {
  return Json{{"alpha_d", summary.alpha_d},
              {"beta_d", summary.beta_d},
              {"alpha_d_se", summary.alpha_d_se},
              {"beta_d_se", summary.beta_d_se},
              {"alpha_r", summary.alpha_r},
              {"beta_r", summary.beta_r},
              {"alpha_r_se", summary.alpha_r_se},
              {"beta_r_se", summary.beta_r_se},
              {"pearson_d", summary.pearson_d},
              {"pearson_r", summary.pearson_r},
              {"pearson_d_defined", summary.pearson_d_defined},
              {"pearson_r_defined", summary.pearson_r_defined}};
}

std::string sweep_to_csv(const SweepGrid& grid) {
  std::ostringstream out;
  out << "degree,ratio,trial,metric,value\n";
  for (std::size_t di = 0; di < grid.degrees.size(); ++di) {
    for (std::size_t ri = 0; ri < grid.ratios.size(); ++ri) {
      const SweepCell& cell = grid.cell(di, ri);
      for (std::size_t t = 0; t < cell.values.size(); ++t) {
        out << grid.degrees[di] << ',' << format_double(grid.ratios[ri]) << ','
            << t << ',' << grid.metric << ',' << format_double(cell.values[t])
            << '\n';
      }
    }
  }
  return out.str();
}

Json sweep_summary_to_json(const SweepGrid& grid,
                           const RegressionSummary& summary) {
  Json cells = Json::array();
  for (std::size_t di = 0; di < grid.degrees.size(); ++di) {
    for (std::size_t ri = 0; ri < grid.ratios.size(); ++ri) {
      const SweepCell& cell = grid.cell(di, ri);
      cells.push_back({{"degree", grid.degrees[di]},
                       {"ratio", grid.ratios[ri]},
                       {"mean", cell.mean},
                       {"stddev", cell.stddev}});
    }
  }
  return Json{{"metric", grid.metric},
              {"trials_per_cell", grid.trials_per_cell},
              {"seed", grid.seed},
              {"cells", std::move(cells)},
              {"regression", regression_to_json(summary)}};
}

void save_state(const DensityMatrix& rho, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot write '" + path + "'");
  }
  const Json header{{"num_qubits", rho.num_qubits()},
                    {"layout", "row-major"},
                    {"dtype", "complex64"}};
  out << header.dump() << '\n';
  const auto dim = rho.dim();
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const float re = static_cast<float>(rho.matrix()(r, c).real());
      const float im = static_cast<float>(rho.matrix()(r, c).imag());
      out.write(reinterpret_cast<const char*>(&re), sizeof(float));
      out.write(reinterpret_cast<const char*>(&im), sizeof(float));
    }
  }
}

DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw ParseError("state dump lacks a header line");
  }
  Json header;
  try {
    header = Json::parse(header_line);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("bad state header: ") + e.what());
  }
  const std::uint32_t n = require_uint(header, "num_qubits");
  if (n > DensityMatrix::kMaxQubits) {
    throw CapacityError("state dump exceeds the 10-qubit cap");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      float re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), sizeof(float));
      in.read(reinterpret_cast<char*>(&im), sizeof(float));
      if (!in) {
        throw ParseError("state dump truncated");
      }
      m(r, c) = Complex(re, im);
    }
  }
  // float32 storage leaves rounding residue; validate loosely.
  return DensityMatrix::from_matrix(n, std::move(m), 1e-4);
}

}  // namespace measkit
