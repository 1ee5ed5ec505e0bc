#include "circuitforge/objectives.hpp"

#include <algorithm>
#include <cmath>

namespace circuitforge {

namespace {

double element_scale(const SpectrumReport& report, const CostSpec& spec) {
  if (!spec.normalize_elements) return 1.0;
  double best = 0.0;
  const auto& table = report.elements(spec.operator_label);
  const int n = std::min<int>(3, static_cast<int>(table.rows()));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      best = std::max(best, std::abs(table(i, j)));
    }
  }
  return best > 0.0 ? best : 1.0;
}

double total_of(const std::vector<double>& d, double weight) {
  double s = 0.0;
  for (double x : d) s += x * x;
  return s / weight;
}

}  // namespace

CostBreakdown ladder_cost(const SpectrumReport& report, const CostSpec& spec) {
  if (report.level_count() < 4) {
    throw InsufficientLevelsError("ladder cost needs at least 4 levels");
  }
  const double s = spec.frequency_scale;
  const double w10 = report.transition(1, 0);
  const double w21 = report.transition(2, 1);
  const double w32 = report.transition(3, 2);
  const double w30 = report.transition(3, 0);
  const double scale = element_scale(report, spec);
  auto el = [&](int i, int j) {
    return report.element_magnitude(spec.operator_label, i, j) / scale;
  };
  CostBreakdown out;
  double d2 = (std::abs(w32 - w21) - spec.gamma) / s;
  double d3 = (std::abs(w32 - w10) - spec.gamma) / s;
  if (spec.clamp_detuning) {
    // only penalize detunings smaller than gamma
    d2 = std::min(d2, 0.0);
    d3 = std::min(d3, 0.0);
  }
  out.distances = {
      std::abs(w21 - w10) / s,
      d2,
      d3,
      std::abs(w30 - spec.omega_max) / s,
      std::abs(el(0, 1) - 1.0),
      std::abs(el(1, 2) - 1.0),
      el(0, 2),
  };
  out.total = total_of(out.distances, 49.0);
  return out;
}

CostBreakdown lambda_cost(const SpectrumReport& report, const CostSpec& spec) {
  if (report.level_count() < 4) {
    throw InsufficientLevelsError("lambda cost needs at least 4 levels");
  }
  const double s = spec.frequency_scale;
  const double w10 = report.transition(1, 0);
  const double w20 = report.transition(2, 0);
  const double w21 = report.transition(2, 1);
  const double w30 = report.transition(3, 0);
  const double scale = element_scale(report, spec);
  auto el = [&](int i, int j) {
    return report.element_magnitude(spec.operator_label, i, j) / scale;
  };
  CostBreakdown out;
  out.distances = {
      std::abs(w10) / s,
      std::abs(w20 - w21) / s,
      std::abs(w30 - spec.omega_max) / s,
      el(0, 1),
      std::abs(el(0, 2) - 1.0),
      std::abs(el(1, 2) - 1.0),
  };
  out.total = total_of(out.distances, 36.0);
  return out;
}

CostBreakdown evaluate_cost(const SpectrumReport& report, const CostSpec& spec) {
  return spec.target == TargetKind::Ladder ? ladder_cost(report, spec)
                                           : lambda_cost(report, spec);
}

}  // namespace circuitforge
