#include "circuitforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "circuitforge/threads.hpp"

namespace circuitforge {

SweepResult flux_sweep(const ChainCircuit& circuit, double phase_min,
                       double phase_max, int steps, int levels,
                       const std::vector<std::string>& operator_labels,
                       const TruncationPolicy& truncation) {
  if (steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
  SweepResult result;
  result.levels = levels;
  result.operator_labels = operator_labels;
  result.points.resize(steps);
  parallel_for(0, steps, [&](int i) {
    const double phase =
        phase_min + (phase_max - phase_min) * double(i) / double(steps - 1);
    SweepPoint& pt = result.points[i];
    pt.phase = phase;
    try {
      ChainCircuit at = circuit;
      for (auto& loop : at.loops) loop.external_phase = phase;
      auto sys = assemble_chain_hamiltonian(at, truncation);
      pt.report = spectrum_report(sys, std::min(levels, sys.dimension()),
                                  operator_labels);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });
  return result;
}

namespace {

struct CapacitorRef {
  int loop = -1;    // -1: coupling capacitor
  int branch = -1;  // branch index or coupling index
};

// The coupling capacitor for chains, the largest capacitor otherwise.
CapacitorRef designated_capacitor(const ChainCircuit& circuit) {
  if (!circuit.coupling_capacitances.empty()) {
    int best = 0;
    for (std::size_t i = 1; i < circuit.coupling_capacitances.size(); ++i) {
      if (circuit.coupling_capacitances[i] > circuit.coupling_capacitances[best])
        best = static_cast<int>(i);
    }
    return {-1, best};
  }
  CapacitorRef ref;
  double best = -1.0;
  for (std::size_t k = 0; k < circuit.loops.size(); ++k) {
    for (int l = 0; l < 4; ++l) {
      const auto& b = circuit.loops[k].branches[l];
      double c = 0.0;
      if (b.kind == BranchKind::Capacitor) c = b.capacitance;
      if (b.kind == BranchKind::JosephsonJunction) c = b.junction_capacitance;
      if (c > best) {
        best = c;
        ref = {static_cast<int>(k), l};
      }
    }
  }
  return ref;
}

double draw_factor(PerturbationSpec::Distribution dist, double sigma,
                   std::mt19937_64& rng) {
  if (dist == PerturbationSpec::Distribution::UniformPlusMinus) {
    std::uniform_real_distribution<double> u(-sigma, sigma);
    return 1.0 + u(rng);
  }
  std::normal_distribution<double> g(0.0, sigma);
  return 1.0 + g(rng);
}

double clamp_positive(double value, double nominal) {
  const double floor = 1e-3 * nominal;
  return value > floor ? value : floor;
}

}  // namespace

ChainCircuit perturb_parameters(const ChainCircuit& circuit,
                                const PerturbationSpec& spec,
                                std::mt19937_64& rng) {
  ChainCircuit out = circuit;
  if (spec.mode == PerturbationSpec::Mode::SingleCapacitor) {
    const auto ref = designated_capacitor(circuit);
    const double f = draw_factor(spec.distribution, spec.sigma, rng);
    if (ref.loop < 0 && ref.branch >= 0) {
      double& c = out.coupling_capacitances[ref.branch];
      c = clamp_positive(c * f, c);
    } else if (ref.loop >= 0) {
      auto& b = out.loops[ref.loop].branches[ref.branch];
      if (b.kind == BranchKind::Capacitor) {
        b.capacitance = clamp_positive(b.capacitance * f, b.capacitance);
      } else {
        b.junction_capacitance =
            clamp_positive(b.junction_capacitance * f, b.junction_capacitance);
      }
    }
    return out;
  }
  for (auto& loop : out.loops) {
    for (auto& b : loop.branches) {
      switch (b.kind) {
        case BranchKind::Capacitor:
          b.capacitance = clamp_positive(
              b.capacitance * draw_factor(spec.distribution, spec.sigma, rng),
              b.capacitance);
          break;
        case BranchKind::Inductor:
          b.inductance = clamp_positive(
              b.inductance * draw_factor(spec.distribution, spec.sigma, rng),
              b.inductance);
          break;
        case BranchKind::JosephsonJunction:
          b.junction_capacitance = clamp_positive(
              b.junction_capacitance *
                  draw_factor(spec.distribution, spec.sigma, rng),
              b.junction_capacitance);
          b.josephson_energy = clamp_positive(
              b.josephson_energy *
                  draw_factor(spec.distribution, spec.sigma, rng),
              b.josephson_energy);
          break;
        case BranchKind::Absent:
          break;
      }
    }
  }
  for (auto& c : out.coupling_capacitances) {
    c = clamp_positive(c * draw_factor(spec.distribution, spec.sigma, rng), c);
  }
  return out;
}

RobustnessResult robustness_study(const ChainCircuit& circuit,
                                  const PerturbationSpec& spec,
                                  TargetKind target, std::uint64_t seed,
                                  const TruncationPolicy& truncation,
                                  int envelope_steps, int levels) {
  RobustnessResult result;
  result.samples.resize(spec.samples);

  // Draw all samples up front from one stream so the set is independent of
  // evaluation order.
  std::vector<ChainCircuit> drawn(spec.samples);
  {
    std::mt19937_64 rng(seed);
    for (int s = 0; s < spec.samples; ++s) {
      drawn[s] = perturb_parameters(circuit, spec, rng);
    }
  }

  const int sweep_levels = std::max(levels, target == TargetKind::Ladder ? 4 : 3);
  if (envelope_steps > 0) {
    result.envelope_phases.resize(envelope_steps);
    for (int i = 0; i < envelope_steps; ++i) {
      result.envelope_phases[i] =
          -2.0 * std::numbers::pi +
          4.0 * std::numbers::pi * double(i) / double(envelope_steps - 1);
    }
    result.envelopes.assign(
        envelope_steps,
        std::vector<std::array<double, 3>>(
            sweep_levels - 1,
            {std::numeric_limits<double>::infinity(), 0.0,
             -std::numeric_limits<double>::infinity()}));
  }

  std::mutex envelope_mutex;
  parallel_for(0, spec.samples, [&](int s) {
    RobustnessSample& out = result.samples[s];
    try {
      auto sys = assemble_chain_hamiltonian(drawn[s], truncation);
      auto report = spectrum_report(sys, std::min(sweep_levels, sys.dimension()), {});
      if (report.level_count() >= 3) {
        out.r_21_20 = transition_ratio(report, {2, 1}, {2, 0});
      }
      if (report.level_count() >= 4) {
        out.r_21_10 = transition_ratio(report, {2, 1}, {1, 0});
        out.r_32_21 = transition_ratio(report, {3, 2}, {2, 1});
      }
      out.ok = true;
      if (envelope_steps > 0) {
        auto sweep = flux_sweep(drawn[s], -2.0 * std::numbers::pi,
                                2.0 * std::numbers::pi, envelope_steps,
                                sweep_levels, {}, truncation);
        std::lock_guard<std::mutex> lock(envelope_mutex);
        for (int i = 0; i < envelope_steps; ++i) {
          if (!sweep.points[i].report) continue;
          const auto& rep = *sweep.points[i].report;
          for (int l = 0; l + 1 < sweep_levels && l + 1 < rep.level_count(); ++l) {
            const double w = rep.transition(l + 1, 0);
            auto& env = result.envelopes[i][l];
            env[0] = std::min(env[0], w);
            env[1] += w / spec.samples;
            env[2] = std::max(env[2], w);
          }
        }
      }
    } catch (const std::exception&) {
      out.ok = false;
    }
  });

  auto accumulate = [&](auto getter, double& mean, double& sd) {
    double sum = 0.0, sum2 = 0.0;
    int n = 0;
    for (const auto& s : result.samples) {
      if (!s.ok) continue;
      const double v = getter(s);
      sum += v;
      sum2 += v * v;
      ++n;
    }
    if (n > 0) {
      mean = sum / n;
      sd = n > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / n) / (n - 1)))
                 : 0.0;
    }
  };
  accumulate([](const RobustnessSample& s) { return s.r_21_10; },
             result.mean_r_21_10, result.sd_r_21_10);
  accumulate([](const RobustnessSample& s) { return s.r_32_21; },
             result.mean_r_32_21, result.sd_r_32_21);
  accumulate([](const RobustnessSample& s) { return s.r_21_20; },
             result.mean_r_21_20, result.sd_r_21_20);
  result.failed = spec.samples -
      static_cast<int>(std::count_if(result.samples.begin(), result.samples.end(),
                                     [](const RobustnessSample& s) { return s.ok; }));
  return result;
}

}  // namespace circuitforge
