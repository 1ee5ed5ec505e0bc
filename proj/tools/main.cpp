#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>

#include "circuitforge/analysis.hpp"
#include "circuitforge/constants.hpp"
#include "circuitforge/dynamics.hpp"
#include "circuitforge/ga.hpp"
#include "circuitforge/io.hpp"
#include "circuitforge/objectives.hpp"
#include "circuitforge/quantize.hpp"
#include "circuitforge/spectrum.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace circuitforge;

namespace {

struct CommonOptions {
  std::string circuit_path;
  std::string out_dir = ".";
  int levels = 4;
  int charge_n_max = 10;
  int fock_m_max = 12;
  double gamma_ghz = 1.0;
  double omega_max_ghz = 16.0;
  std::string target = "ladder";
  std::uint64_t seed = 1;
  bool emit_plots = true;
};

TruncationPolicy truncation_of(const CommonOptions& o) {
  TruncationPolicy t;
  t.charge_n_max = o.charge_n_max;
  t.fock_m_max = o.fock_m_max;
  return t;
}

CostSpec cost_spec_of(const CommonOptions& o) {
  CostSpec spec;
  spec.target = o.target == "lambda" ? TargetKind::Lambda : TargetKind::Ladder;
  spec.gamma = o.gamma_ghz * 1e9;
  spec.omega_max = o.omega_max_ghz * 1e9;
  return spec;
}

json config_echo(const CommonOptions& o, const std::string& command) {
  json j;
  j["command"] = command;
  j["circuit"] = o.circuit_path;
  j["levels"] = o.levels;
  j["charge_n_max"] = o.charge_n_max;
  j["fock_m_max"] = o.fock_m_max;
  j["gamma_ghz"] = o.gamma_ghz;
  j["omega_max_ghz"] = o.omega_max_ghz;
  j["target"] = o.target;
  j["seed"] = o.seed;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_result(const CommonOptions& o, const std::string& name,
                  const json& result) {
  fs::create_directories(o.out_dir);
  write_text(fs::path(o.out_dir) / (name + "_result.json"), result.dump(2) + "\n");
}

double ghz(double hz) { return hz / 1e9; }

json spectrum_to_json(const SpectrumReport& report) {
  json j;
  j["levels_hz"] = std::vector<double>(
      report.levels.data(), report.levels.data() + report.levels.size());
  json trans;
  for (int i = 1; i < report.level_count(); ++i) {
    trans["w" + std::to_string(i) + "0"] = report.transition(i, 0);
  }
  for (int i = 2; i < report.level_count(); ++i) {
    trans["w" + std::to_string(i) + std::to_string(i - 1)] =
        report.transition(i, i - 1);
  }
  j["transitions_hz"] = trans;
  for (const auto& [label, table] : report.matrix_elements) {
    json rows = json::array();
    for (int i = 0; i < table.rows(); ++i) {
      json row = json::array();
      for (int jcol = 0; jcol < table.cols(); ++jcol) {
        row.push_back(std::abs(table(i, jcol)));
      }
      rows.push_back(row);
    }
    j["element_magnitudes"][label] = rows;
  }
  return j;
}

int run_quantize(const CommonOptions& o) {
  ChainCircuit circuit = load_circuit_file(o.circuit_path);
  auto validity = validate_circuit(circuit);
  if (!validity.valid) {
    std::cerr << "invalid circuit: " << to_string(validity.reason) << "\n";
    return 1;
  }
  check_component_values(circuit);
  json result = config_echo(o, "quantize");
  json loops = json::array();
  for (std::size_t k = 0; k < circuit.loops.size(); ++k) {
    HamiltonianSpec spec = reduce_loop(circuit.loops[k]);
    json jl;
    jl["active_nodes"] = spec.node_labels;
    json bases = json::array();
    for (int l = 0; l < spec.size(); ++l) {
      bases.push_back(select_basis(spec, l) == BasisChoice::Type::Charge
                          ? "charge"
                          : "fock");
    }
    jl["bases"] = bases;
    json ec, el;
    for (int i = 0; i < spec.size(); ++i) {
      ec.push_back(spec.charge_energy(i, i));
      el.push_back(spec.inductive_energy(i, i));
    }
    jl["charge_energy_diag_hz"] = ec;
    jl["inductive_energy_diag_hz"] = el;
    loops.push_back(jl);
  }
  result["loops"] = loops;
  auto sys = assemble_chain_hamiltonian(circuit, truncation_of(o));
  result["dimension"] = sys.dimension();
  write_result(o, "quantize", result);
  std::cout << "quantized " << circuit.loops.size() << " loop(s), dimension "
            << sys.dimension() << "\n";
  for (std::size_t k = 0; k < circuit.loops.size(); ++k) {
    std::cout << "  loop " << k << ": bases";
    for (const auto& b : loops[k]["bases"]) {
      std::cout << " " << b.get<std::string>();
    }
    std::cout << "\n";
  }
  return 0;
}

int run_spectrum(const CommonOptions& o) {
  ChainCircuit circuit = load_circuit_file(o.circuit_path);
  auto sys = assemble_chain_hamiltonian(circuit, truncation_of(o));
  std::vector<std::string> labels;
  if (sys.node_count() > 0) {
    labels = {"charge-edge-left", "charge-edge-right"};
  }
  auto report =
      spectrum_report(sys, std::min(o.levels, sys.dimension()), labels);
  json result = config_echo(o, "spectrum");
  result["spectrum"] = spectrum_to_json(report);
  write_result(o, "spectrum", result);
  std::cout << "levels: " << report.level_count() << " of dimension "
            << sys.dimension() << "\n";
  for (int i = 1; i < report.level_count(); ++i) {
    std::cout << "  w" << i << (i - 1) << " = " << ghz(report.transition(i, i - 1))
              << " GHz, w" << i << "0 = " << ghz(report.transition(i, 0))
              << " GHz\n";
  }
  if (report.level_count() >= 3 && !labels.empty()) {
    const auto& label = labels.front();
    std::cout << "  |N01| = " << report.element_magnitude(label, 0, 1)
              << ", |N12| = " << report.element_magnitude(label, 1, 2)
              << ", |N02| = " << report.element_magnitude(label, 0, 2) << "\n";
  }
  return 0;
}

int run_sweep(const CommonOptions& o, double flux_min, double flux_max,
              int flux_steps) {
  ChainCircuit circuit = load_circuit_file(o.circuit_path);
  std::vector<std::string> labels = {"charge-edge-left"};
  auto sweep = flux_sweep(circuit, flux_min, flux_max, flux_steps,
                          std::max(o.levels, 4), labels, truncation_of(o));
  json result = config_echo(o, "sweep");
  result["flux_min"] = flux_min;
  result["flux_max"] = flux_max;
  result["steps"] = flux_steps;
  json points = json::array();
  std::ostringstream dat;
  dat << "# phi_x w10_hz w21_hz w32_hz absN01 absN12 absN02\n";
  int failures = 0;
  for (const auto& pt : sweep.points) {
    if (!pt.report) {
      ++failures;
      json jp;
      jp["phi_x"] = pt.phase;
      jp["error"] = pt.error;
      points.push_back(jp);
      continue;
    }
    const auto& rep = *pt.report;
    json jp;
    jp["phi_x"] = pt.phase;
    jp["spectrum"] = spectrum_to_json(rep);
    points.push_back(jp);
    dat << pt.phase;
    for (int i = 1; i <= 3 && i < rep.level_count(); ++i) {
      dat << " " << rep.transition(i, i - 1);
    }
    dat << " " << rep.element_magnitude(labels[0], 0, 1) << " "
        << rep.element_magnitude(labels[0], 1, 2) << " "
        << rep.element_magnitude(labels[0], 0, 2) << "\n";
  }
  result["points"] = points;
  result["failed_points"] = failures;
  write_result(o, "sweep", result);
  if (o.emit_plots) {
    fs::create_directories(o.out_dir);
    write_text(fs::path(o.out_dir) / "sweep_spectrum.dat", dat.str());
  }
  std::cout << "swept " << flux_steps << " points, " << failures
            << " failures\n";
  return 0;
}

int run_optimize(const CommonOptions& o, int epochs, int population,
                 double mutation_rate) {
  CostSpec cost = cost_spec_of(o);
  TruncationPolicy trunc = truncation_of(o);
  auto fitness = make_cost_fitness(cost, trunc);

  GAConfig config;
  config.population = population;
  config.survivors = population / 2;
  config.mutation_rate = mutation_rate;
  config.epochs = epochs;
  config.seed = o.seed;

  FixedParameters fixed;
  auto stage1 = optimize_topology(fitness, fixed, config);
  auto stage2 = optimize_parameters(stage1.best, fitness, config);
  const auto& best = stage2.best_cost <= stage1.best_cost ? stage2 : stage1;

  json result = config_echo(o, "optimize");
  result["population"] = population;
  result["epochs"] = epochs;
  result["mutation_rate"] = mutation_rate;
  result["stage1_best_cost"] = stage1.best_cost;
  result["stage2_best_cost"] = stage2.best_cost;
  result["history_topology"] = stage1.history;
  result["history_parameters"] = stage2.history;
  result["best_cost"] = best.best_cost;
  result["best_circuit"] = json::parse(serialize_circuit(best.best));
  write_result(o, "optimize", result);
  fs::create_directories(o.out_dir);
  write_text(fs::path(o.out_dir) / "optimize_best_circuit.json",
             serialize_circuit(best.best));
  std::cout << "best cost " << best.best_cost << " after " << epochs
            << " epochs (stage1 " << stage1.best_cost << ", stage2 "
            << stage2.best_cost << ")\n";
  return 0;
}

int run_dynamics(const CommonOptions& o, double omega_ghz, const std::string& nu,
                 double horizon) {
  ChainCircuit circuit = load_circuit_file(o.circuit_path);
  auto sys = assemble_chain_hamiltonian(circuit, truncation_of(o));
  auto probe = spectrum_report(sys, std::min(4, sys.dimension()), {});
  DriveSpec drive;
  drive.levels = std::max(o.levels, 4);
  drive.horizon = horizon;
  if (nu == "w10") {
    drive.frequency = probe.transition(1, 0);
    drive.initial_state = 0;
  } else if (nu == "w21") {
    drive.frequency = probe.transition(2, 1);
    drive.initial_state = 0;
  } else if (nu == "w20") {
    drive.frequency = probe.transition(2, 0);
    drive.initial_state = 1;
  } else {
    drive.frequency = std::stod(nu) * 1e9;
    drive.initial_state = 0;
  }
  drive.amplitude = omega_ghz > 0.0 ? omega_ghz * 1e9
                                    : probe.transition(1, 0) / 50.0;
  auto report = evolve_driven(circuit, drive, truncation_of(o));

  json result = config_echo(o, "dynamics");
  result["omega_hz"] = drive.amplitude;
  result["nu_hz"] = drive.frequency;
  result["initial_state"] = drive.initial_state;
  result["t_eff_s"] = report.t_eff;
  result["norm_drift"] = report.norm_drift;
  write_result(o, "dynamics", result);
  if (o.emit_plots) {
    std::ostringstream dat;
    dat << "# time_s";
    for (int j = 0; j < drive.levels; ++j) dat << " P" << j;
    dat << "\n";
    for (std::size_t i = 0; i < report.times.size(); ++i) {
      dat << report.times[i];
      for (double p : report.populations[i]) dat << " " << p;
      dat << "\n";
    }
    fs::create_directories(o.out_dir);
    write_text(fs::path(o.out_dir) / "dynamics_populations.dat", dat.str());
  }
  std::cout << "drive " << ghz(drive.amplitude) << " GHz at "
            << ghz(drive.frequency) << " GHz from |" << drive.initial_state
            << ">, t_eff = " << report.t_eff << " s, norm drift "
            << report.norm_drift << "\n";
  return 0;
}

int run_robustness(const CommonOptions& o, double sigma, const std::string& mode,
                   int samples) {
  ChainCircuit circuit = load_circuit_file(o.circuit_path);
  PerturbationSpec spec;
  spec.sigma = sigma;
  spec.samples = samples;
  if (mode == "single-cap") {
    spec.mode = PerturbationSpec::Mode::SingleCapacitor;
    spec.distribution = PerturbationSpec::Distribution::UniformPlusMinus;
  } else {
    spec.mode = PerturbationSpec::Mode::AllParameters;
    spec.distribution = PerturbationSpec::Distribution::Normal;
  }
  const TargetKind target =
      o.target == "lambda" ? TargetKind::Lambda : TargetKind::Ladder;
  auto result = robustness_study(circuit, spec, target, o.seed, truncation_of(o));

  json j = config_echo(o, "robustness");
  j["sigma"] = sigma;
  j["mode"] = mode;
  j["samples"] = samples;
  j["failed"] = result.failed;
  j["mean_r_21_10"] = result.mean_r_21_10;
  j["sd_r_21_10"] = result.sd_r_21_10;
  j["mean_r_32_21"] = result.mean_r_32_21;
  j["sd_r_32_21"] = result.sd_r_32_21;
  j["mean_r_21_20"] = result.mean_r_21_20;
  j["sd_r_21_20"] = result.sd_r_21_20;
  write_result(o, "robustness", j);
  if (o.emit_plots) {
    std::ostringstream dat;
    dat << "# sample ok r_21_10 r_32_21 r_21_20\n";
    for (std::size_t s = 0; s < result.samples.size(); ++s) {
      const auto& r = result.samples[s];
      dat << s << " " << (r.ok ? 1 : 0) << " " << r.r_21_10 << " " << r.r_32_21
          << " " << r.r_21_20 << "\n";
    }
    std::ostringstream summary;
    summary << "# quantity mean sd\n"
            << "r_21_10 " << result.mean_r_21_10 << " " << result.sd_r_21_10 << "\n"
            << "r_32_21 " << result.mean_r_32_21 << " " << result.sd_r_32_21 << "\n"
            << "r_21_20 " << result.mean_r_21_20 << " " << result.sd_r_21_20 << "\n";
    fs::create_directories(o.out_dir);
    write_text(fs::path(o.out_dir) / "robustness_ratios.dat", dat.str());
    write_text(fs::path(o.out_dir) / "robustness_summary.dat", summary.str());
  }
  std::cout << "robustness over " << samples << " samples (" << result.failed
            << " failed): mean R21,10 = " << result.mean_r_21_10
            << ", mean R32,21 = " << result.mean_r_32_21
            << ", mean R21,20 = " << result.mean_r_21_20 << "\n";
  return 0;
}

int run_convergence(const CommonOptions& o, int m_min, int m_max) {
  ChainCircuit circuit = load_circuit_file(o.circuit_path);
  auto report = convergence_study(circuit, m_min, m_max);
  json j = config_echo(o, "convergence");
  j["m_min"] = m_min;
  j["m_max"] = m_max;
  json rows = json::array();
  for (std::size_t i = 0; i < report.m_values.size(); ++i) {
    json row;
    row["m"] = report.m_values[i];
    row["eps"] = report.relative_errors[i];
    rows.push_back(row);
  }
  j["relative_errors"] = rows;
  if (report.converged_m) {
    j["converged_m"] = *report.converged_m;
  }
  write_result(o, "convergence", j);
  for (std::size_t i = 0; i < report.m_values.size(); ++i) {
    std::cout << "m = " << report.m_values[i] << ": eps =";
    for (double e : report.relative_errors[i]) std::cout << " " << e;
    std::cout << "\n";
  }
  if (report.converged_m) {
    std::cout << "converged at m = " << *report.converged_m << "\n";
  } else {
    std::cout << "no m in range met the tolerance\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lumped-element circuit quantization and spectrum toolkit"};
  app.require_subcommand(1);

  CommonOptions o;
  double flux_min = -2.0 * std::numbers::pi;
  double flux_max = 2.0 * std::numbers::pi;
  int flux_steps = 101;
  int epochs = 50;
  int population = 16;
  double mutation_rate = 0.01;
  double omega_ghz = 0.0;
  std::string nu = "w10";
  double horizon = 2.0;
  double sigma = 0.05;
  std::string mode = "all";
  int samples = 100;
  int m_min = 4, m_max = 16;

  auto add_common = [&](CLI::App* cmd, bool needs_circuit = true) {
    if (needs_circuit) {
      cmd->add_option("--circuit", o.circuit_path, "circuit JSON file")
          ->required();
    }
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--levels", o.levels, "number of levels to report");
    cmd->add_option("--charge-nmax", o.charge_n_max, "charge-basis cutoff n_max");
    cmd->add_option("--fock-mmax", o.fock_m_max, "Fock-basis cutoff m_max");
    cmd->add_option("--gamma", o.gamma_ghz, "detuning floor Gamma [GHz]");
    cmd->add_option("--omega-max", o.omega_max_ghz, "spectral cut-off [GHz]");
    cmd->add_option("--target", o.target, "ladder or lambda")
        ->check(CLI::IsMember({"ladder", "lambda"}));
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_flag("--no-plots",
                  [&](std::int64_t) { o.emit_plots = false; },
                  "skip gnuplot data emission");
  };

  auto* quantize = app.add_subcommand("quantize", "reduce and quantize a circuit");
  add_common(quantize);
  auto* spectrum = app.add_subcommand("spectrum", "diagonalize and report figures of merit");
  add_common(spectrum);
  auto* sweep = app.add_subcommand("sweep", "flux sweep");
  add_common(sweep);
  sweep->add_option("--flux-min", flux_min, "sweep start [rad]");
  sweep->add_option("--flux-max", flux_max, "sweep end [rad]");
  sweep->add_option("--flux-steps", flux_steps, "grid points");
  auto* optimize = app.add_subcommand("optimize", "run the two-stage genetic search");
  add_common(optimize, false);
  optimize->add_option("--epochs", epochs, "GA epochs per stage");
  optimize->add_option("--population", population, "population size M");
  optimize->add_option("--mutation-rate", mutation_rate, "mutation probability");
  auto* dynamics = app.add_subcommand("dynamics", "driven time evolution");
  add_common(dynamics);
  dynamics->add_option("--omega", omega_ghz, "drive strength [GHz], 0 = w10/50");
  dynamics->add_option("--nu", nu, "drive frequency: w10|w21|w20|<GHz>");
  dynamics->add_option("--horizon", horizon, "evolution horizon in t_eff units");
  auto* robustness = app.add_subcommand("robustness", "Monte Carlo parameter study");
  add_common(robustness);
  robustness->add_option("--sigma", sigma, "relative deviation");
  robustness->add_option("--mode", mode, "single-cap or all")
      ->check(CLI::IsMember({"single-cap", "all"}));
  robustness->add_option("--samples", samples, "sample count");
  auto* convergence = app.add_subcommand("convergence", "truncation convergence study");
  add_common(convergence);
  convergence->add_option("--m-min", m_min, "smallest cutoff");
  convergence->add_option("--m-max", m_max, "largest cutoff");

  CLI11_PARSE(app, argc, argv);

  try {
    if (quantize->parsed()) return run_quantize(o);
    if (spectrum->parsed()) return run_spectrum(o);
    if (sweep->parsed()) return run_sweep(o, flux_min, flux_max, flux_steps);
    if (optimize->parsed())
      return run_optimize(o, epochs, population, mutation_rate);
    if (dynamics->parsed()) return run_dynamics(o, omega_ghz, nu, horizon);
    if (robustness->parsed()) return run_robustness(o, sigma, mode, samples);
    if (convergence->parsed()) return run_convergence(o, m_min, m_max);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
