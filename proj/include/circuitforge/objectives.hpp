#pragma once

#include <string>
#include <vector>

#include "circuitforge/spectrum.hpp"

namespace circuitforge {

enum class TargetKind { Ladder, Lambda };

struct CostSpec {
  TargetKind target = TargetKind::Ladder;
  double gamma = 1e9;        // detuning floor [Hz]
  double omega_max = 16e9;   // spectral cut-off [Hz]
  std::string operator_label = "charge-edge-left";
  // Frequency distances are divided by this before squaring so they are
  // commensurate with the dimensionless matrix-element terms.
  double frequency_scale = 1e9;
  // Normalize the element table by its largest magnitude among the lowest
  // three levels before applying the |.|-1 targets; raw mode uses the bare
  // magnitudes.
  bool normalize_elements = true;
  // Clamp d2/d3 at zero once the detuning exceeds gamma instead of squaring
  // the signed value.
  bool clamp_detuning = false;
};

struct CostBreakdown {
  std::vector<double> distances;
  double total = 0.0;
};

// F_Xi = (1/49) sum d_i^2 over the ladder distances d1..d7.
CostBreakdown ladder_cost(const SpectrumReport& report, const CostSpec& spec);

// F_Lambda = (1/36) sum d'_i^2 over the lambda distances d'1..d'6.
CostBreakdown lambda_cost(const SpectrumReport& report, const CostSpec& spec);

CostBreakdown evaluate_cost(const SpectrumReport& report, const CostSpec& spec);

}  // namespace circuitforge
