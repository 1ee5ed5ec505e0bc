#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circuitforge/objectives.hpp"
#include "circuitforge/quantize.hpp"
#include "circuitforge/spectrum.hpp"

namespace circuitforge {

struct SweepPoint {
  double phase = 0.0;
  std::optional<SpectrumReport> report;  // empty when the point failed
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<std::string> operator_labels;
  int levels = 0;
};

// Re-assemble and diagonalize at each grid point; truncations are held
// fixed across the sweep.  Per-point failures are recorded and skipped.
SweepResult flux_sweep(const ChainCircuit& circuit, double phase_min,
                       double phase_max, int steps, int levels,
                       const std::vector<std::string>& operator_labels,
                       const TruncationPolicy& truncation = {});

struct PerturbationSpec {
  enum class Mode { SingleCapacitor, AllParameters };
  enum class Distribution { UniformPlusMinus, Normal };
  Mode mode = Mode::AllParameters;
  Distribution distribution = Distribution::Normal;
  double sigma = 0.05;  // relative fraction
  int samples = 100;
};

// SingleCapacitor perturbs the designated capacitor (the coupling capacitor
// for chains, otherwise the largest capacitor); AllParameters draws every
// component around its nominal value.  Values are clamped to stay positive.
ChainCircuit perturb_parameters(const ChainCircuit& circuit,
                                const PerturbationSpec& spec,
                                std::mt19937_64& rng);

struct RobustnessSample {
  bool ok = false;
  double r_21_10 = 0.0;
  double r_32_21 = 0.0;
  double r_21_20 = 0.0;
};

struct RobustnessResult {
  std::vector<RobustnessSample> samples;
  int failed = 0;
  double mean_r_21_10 = 0.0, sd_r_21_10 = 0.0;
  double mean_r_32_21 = 0.0, sd_r_32_21 = 0.0;
  double mean_r_21_20 = 0.0, sd_r_21_20 = 0.0;
  // Flux-sweep envelopes across samples (per grid point: min/mean/max of
  // the lowest `levels` transitions from the ground state).
  std::vector<double> envelope_phases;
  std::vector<std::vector<std::array<double, 3>>> envelopes;
};

// Monte Carlo over perturbed circuits: per-sample transition ratios plus
// mean/sd; optional sweep envelopes when envelope_steps > 0.
RobustnessResult robustness_study(const ChainCircuit& circuit,
                                  const PerturbationSpec& spec,
                                  TargetKind target, std::uint64_t seed,
                                  const TruncationPolicy& truncation = {},
                                  int envelope_steps = 0, int levels = 4);

}  // namespace circuitforge
