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

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "measkit/io.hpp"
#include "measkit/rng.hpp"

namespace {

using namespace measkit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitNumerical = 5;

struct CommonOptions {
  std::string observable_path;
  std::string device;
  std::string kernel = "qwc";
  double epsilon_target = 0.01;
  std::string noise_mode = "device";
  std::optional<double> shots;
  std::optional<double> precision;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string units = "hartree";
  std::string out;
};

void emit(const std::string& out_path, const Json& payload) {
  const std::string text = payload.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

GroupingContext build_context(const CommonOptions& opts, std::uint32_t num_qubits) {
  GroupingContext context;
  if (!opts.device.empty()) {
    context.device = load_device(opts.device, num_qubits);
    if (context.device->graph.num_qubits() < num_qubits) {
      throw ArgumentError("device has fewer qubits than the observable");
    }
  }
  context.epsilon_target = opts.epsilon_target;
  return context;
}

std::vector<MeasurementGroup> grouped_pipeline(const WeightedObservable& observable,
                                               const CommonOptions& opts,
                                               const GroupingContext& context) {
  const auto kernel = make_kernel(opts.kernel);
  std::vector<MeasurementGroup> groups =
      sorted_insertion(observable, *kernel, context);
  for (MeasurementGroup& g : groups) {
    synthesize_group(g, context);
  }
  return groups;
}

NoiseChannelSpec build_noise(const CommonOptions& opts,
                             const GroupingContext& context) {
  if (opts.noise_mode == "ideal") {
    return NoiseChannelSpec::ideal();
  }
  if (!context.device) {
    throw ConfigError("noise mode '" + opts.noise_mode + "' requires a device");
  }
  if (opts.noise_mode == "validation") {
    return NoiseChannelSpec::validation(context.device->noise.p_2q);
  }
  if (opts.noise_mode == "device") {
    return NoiseChannelSpec::device(context.device->noise);
  }
  throw ArgumentError("unknown noise mode '" + opts.noise_mode + "'");
}

int cmd_group(const CommonOptions& opts) {
  const WeightedObservable observable =
      load_observable(opts.observable_path, &std::cerr);
  const GroupingContext context = build_context(opts, observable.num_qubits());
  const std::vector<MeasurementGroup> groups =
      grouped_pipeline(observable, opts, context);

  double mean_2q = 0, mean_depth = 0;
  int max_2q = 0, max_depth = 0;
  for (const MeasurementGroup& g : groups) {
    const GateStats stats = gate_stats(*g.routed_circuit);
    mean_2q += stats.n_2q;
    mean_depth += stats.depth;
    max_2q = std::max(max_2q, stats.n_2q);
    max_depth = std::max(max_depth, stats.depth);
  }
  mean_2q /= static_cast<double>(groups.size());
  mean_depth /= static_cast<double>(groups.size());
  std::cerr << "groups: " << groups.size() << "  n_2q mean/max: " << mean_2q
            << "/" << max_2q << "  depth mean/max: " << mean_depth << "/"
            << max_depth << "\n";

  emit(opts.out, groups_to_json(groups, opts.kernel, context));
  return kExitOk;
}

int cmd_estimate(const CommonOptions& opts, const std::string& state_source,
                 const std::string& ansatz_path, const std::string& dump_path) {
  const WeightedObservable observable =
      load_observable(opts.observable_path, &std::cerr);
  const std::uint32_t n = observable.num_qubits();
  if (n > DensityMatrix::kMaxQubits) {
    throw CapacityError("estimation requires at most 10 qubits");
  }
  const GroupingContext context = build_context(opts, n);
  if (context.device && context.device->graph.num_qubits() != n) {
    throw ArgumentError(
        "estimation requires the device and observable widths to match");
  }
  const std::vector<MeasurementGroup> groups =
      grouped_pipeline(observable, opts, context);
  const NoiseChannelSpec noise = build_noise(opts, context);

  DensityMatrix rho(n);
  if (!ansatz_path.empty()) {
    const Circuit ansatz = load_circuit(ansatz_path);
    rho = apply_circuit(DensityMatrix(n), ansatz, NoiseChannelSpec::ideal());
  } else if (state_source == "ground") {
    rho = ground_state(observable);
  } else if (state_source == "random") {
    rho = random_pure_state(n, substream(opts.seed, "state"));
  } else {
    rho = load_state(state_source);
    if (rho.num_qubits() != n) {
      throw ArgumentError("state file width does not match the observable");
    }
  }

  if (!dump_path.empty()) {
    save_state(rho, dump_path);
  }

  const EstimatorReport report = run_estimation(
      groups, rho, noise, opts.shots, opts.precision, opts.threads);
  const double unit_scale =
      opts.units == "kcalmol" ? kKcalPerHartree : 1.0;
  emit(opts.out,
       report_to_json(report, opts.kernel,
                      context.device ? context.device->name : "none", unit_scale,
                      opts.units));
  return kExitOk;
}

int cmd_allocate(const std::string& variances_path, const CommonOptions& opts) {
  const Json j = read_json_file(variances_path);
  std::vector<double> variances;
  if (j.contains("variances") && j["variances"].is_array()) {
    variances = j["variances"].get<std::vector<double>>();
  } else if (j.contains("per_group") && j["per_group"].is_array()) {
    for (const Json& g : j["per_group"]) {
      variances.push_back(g.at("variance").get<double>());
    }
  } else {
    throw ParseError("expected a 'variances' array or an estimate report");
  }
  ShotAllocation allocation;
  if (opts.shots) {
    allocation = allocate_shots_budget(variances, *opts.shots);
  } else if (opts.precision) {
    allocation = allocate_shots_target(variances, *opts.precision);
  } else {
    throw ArgumentError("allocate needs --shots or --precision");
  }
  if (allocation.all_zero) {
    std::cerr << "warning: all-zero variances, allocation is empty\n";
  }
  emit(opts.out, allocation_to_json(allocation));
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opts, const std::string& degrees_text,
              const std::string& ratios_text, std::uint32_t states,
              const std::string& ansatz_path) {
  const WeightedObservable observable =
      load_observable(opts.observable_path, &std::cerr);
  const std::string base = opts.device.empty() ? "sherbrooke" : opts.device;
  const DeviceModel base_device = load_device(base, observable.num_qubits());

  std::vector<std::uint32_t> degrees;
  {
    std::istringstream in(degrees_text);
    for (std::string tok; std::getline(in, tok, ',');) {
      degrees.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    }
  }
  std::vector<double> ratios;
  {
    std::istringstream in(ratios_text);
    for (std::string tok; std::getline(in, tok, ',');) {
      ratios.push_back(std::stod(tok));
    }
  }

  SweepGrid grid;
  if (!ansatz_path.empty()) {
    const Circuit ansatz = load_circuit(ansatz_path);
    grid = run_bias_sweep(ansatz, observable, base_device, degrees, ratios,
                          opts.epsilon_target, states, opts.seed, opts.threads);
  } else {
    grid = run_variance_sweep(observable, base_device, degrees, ratios,
                              opts.epsilon_target, states, opts.seed,
                              opts.threads);
  }
  const RegressionSummary summary = regress(grid);

  const std::string base_path = opts.out.empty() ? "sweep" : opts.out;
  write_text_file(base_path + ".csv", sweep_to_csv(grid));
  write_text_file(base_path + ".json",
                  sweep_summary_to_json(grid, summary).dump(2) + "\n");
  std::cerr << "wrote " << base_path << ".csv and " << base_path << ".json\n";
  return kExitOk;
}

int cmd_devices(const std::string& action, const std::string& name,
                std::uint32_t num_qubits, const std::string& kind,
                std::uint32_t degree, std::uint64_t seed,
                const std::string& out) {
  if (action == "list") {
    Json names = Json::array();
    for (std::string_view n : device_preset_names()) {
      names.push_back(std::string(n));
    }
    emit(out, Json{{"presets", names}});
    return kExitOk;
  }
  if (action == "show") {
    emit(out, device_to_json(device_preset(name, num_qubits)));
    return kExitOk;
  }
  if (action == "generate") {
    const CouplingGraph graph =
        generate_topology(topology_from_name(kind), num_qubits, degree, seed);
    const DeviceModel device{kind, graph, preset_noise("sherbrooke")};
    emit(out, device_to_json(device));
    return kExitOk;
  }
  throw ArgumentError("unknown devices action '" + action + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pauli grouping, measurement-circuit synthesis, and noisy "
               "estimator analysis for quantum observables"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string state_source = "ground";
  std::string ansatz_path;
  std::string dump_state_path;
  std::string variances_path;
  std::string degrees_text = "2,3,4,5";
  std::string ratios_text = "1,10,100";
  std::uint32_t sweep_states = 10;
  std::string devices_action = "list";
  std::string devices_name = "sherbrooke";
  std::uint32_t devices_qubits = 8;
  std::string devices_kind = "ring";
  std::uint32_t devices_degree = 3;

  auto add_common = [&](CLI::App* cmd, bool needs_observable) {
    if (needs_observable) {
      cmd->add_option("--observable", opts.observable_path, "observable JSON path")
          ->required();
    }
    cmd->add_option("--device", opts.device, "device preset name or JSON path");
    cmd->add_option("--kernel", opts.kernel, "qwc|fc|hec|galic");
    cmd->add_option("--epsilon-target", opts.epsilon_target,
                    "galic relative-error target");
    cmd->add_option("--noise", opts.noise_mode, "ideal|validation|device");
    cmd->add_option("--shots", [&](const CLI::results_t& r) {
      opts.shots = std::stod(r[0]);
      return true;
    }, "total shot budget");
    cmd->add_option("--precision", [&](const CLI::results_t& r) {
      opts.precision = std::stod(r[0]);
      return true;
    }, "precision target epsilon");
    cmd->add_option("--seed", opts.seed, "64-bit seed");
    cmd->add_option("--threads", opts.threads, "parallel group simulations");
    cmd->add_option("--units", opts.units, "hartree|kcalmol");
    cmd->add_option("--out", opts.out, "output path (stdout when omitted)");
  };

  CLI::App* group_cmd = app.add_subcommand("group", "partition an observable");
  add_common(group_cmd, true);

  CLI::App* estimate_cmd =
      app.add_subcommand("estimate", "simulate the full estimator pipeline");
  add_common(estimate_cmd, true);
  estimate_cmd->add_option("--state", state_source,
                           "ground|random|<state-dump path>");
  estimate_cmd->add_option("--ansatz", ansatz_path,
                           "circuit JSON preparing the trial state");
  estimate_cmd->add_option("--dump-state", dump_state_path,
                           "write the trial state as a binary dump");

  CLI::App* allocate_cmd =
      app.add_subcommand("allocate", "minimal-variance shot allocation");
  allocate_cmd
      ->add_option("--variances", variances_path,
                   "variances JSON or estimate report")
      ->required();
  add_common(allocate_cmd, false);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "connectivity x noise design-space sweep");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--degrees", degrees_text, "comma-separated degrees");
  sweep_cmd->add_option("--ratios", ratios_text, "comma-separated ratios >= 1");
  sweep_cmd->add_option("--states", sweep_states, "trials per cell");
  sweep_cmd->add_option("--ansatz", ansatz_path,
                        "bias sweep with this state-preparation circuit");

  CLI::App* devices_cmd = app.add_subcommand("devices", "preset and topology tools");
  devices_cmd->add_option("action", devices_action, "list|show|generate");
  devices_cmd->add_option("name", devices_name, "preset name (show)");
  devices_cmd->add_option("--num-qubits", devices_qubits, "instantiation size");
  devices_cmd->add_option("--kind", devices_kind,
                          "ring|complete|heavy_hex|random_regular (generate)");
  devices_cmd->add_option("--degree", devices_degree, "random_regular degree");
  devices_cmd->add_option("--seed", opts.seed, "generation seed");
  devices_cmd->add_option("--out", opts.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (group_cmd->parsed()) {
      return cmd_group(opts);
    }
    if (estimate_cmd->parsed()) {
      return cmd_estimate(opts, state_source, ansatz_path, dump_state_path);
    }
    if (allocate_cmd->parsed()) {
      return cmd_allocate(variances_path, opts);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(opts, degrees_text, ratios_text, sweep_states,
                       ansatz_path);
    }
    if (devices_cmd->parsed()) {
      return cmd_devices(devices_action, devices_name, devices_qubits,
                         devices_kind, devices_degree, opts.seed, opts.out);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
