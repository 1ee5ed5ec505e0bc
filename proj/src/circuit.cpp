#include "circuitforge/circuit.hpp"

#include <stdexcept>
#include <string>

namespace circuitforge {

BranchSpec BranchSpec::capacitor(double farads) {
  BranchSpec b;
  b.kind = BranchKind::Capacitor;
  b.capacitance = farads;
  return b;
}

BranchSpec BranchSpec::inductor(double henries) {
  BranchSpec b;
  b.kind = BranchKind::Inductor;
  b.inductance = henries;
  return b;
}

BranchSpec BranchSpec::junction(double farads, double hertz) {
  BranchSpec b;
  b.kind = BranchKind::JosephsonJunction;
  b.junction_capacitance = farads;
  b.josephson_energy = hertz;
  return b;
}

const char* to_string(ValidityReason reason) {
  switch (reason) {
    case ValidityReason::OnlyCapacitive: return "OnlyCapacitive";
    case ValidityReason::OnlyInductive: return "OnlyInductive";
    case ValidityReason::AllAbsent: return "AllAbsent";
    case ValidityReason::Valid: return "Valid";
  }
  return "?";
}

ValidityReport validate_topology(const LoopTopology& topology) {
  int caps = 0, inds = 0, juncs = 0;
  for (const auto& b : topology.branches) {
    switch (b.kind) {
      case BranchKind::Capacitor: ++caps; break;
      case BranchKind::Inductor: ++inds; break;
      case BranchKind::JosephsonJunction: ++juncs; break;
      case BranchKind::Absent: break;
    }
  }
  if (caps + inds + juncs == 0) return {false, ValidityReason::AllAbsent};
  if (juncs > 0) return {true, ValidityReason::Valid};
  if (inds == 0) return {false, ValidityReason::OnlyCapacitive};
  if (caps == 0) return {false, ValidityReason::OnlyInductive};
  return {true, ValidityReason::Valid};
}

ValidityReport validate_circuit(const ChainCircuit& circuit) {
  for (const auto& loop : circuit.loops) {
    auto report = validate_topology(loop);
    if (!report.valid) return report;
  }
  return {true, ValidityReason::Valid};
}

void check_component_values(const ChainCircuit& circuit) {
  if (circuit.loops.empty()) {
    throw std::invalid_argument("circuit has no loops");
  }
  if (circuit.coupling_capacitances.size() + 1 != circuit.loops.size()) {
    throw std::invalid_argument("expected one coupling capacitor per adjacent loop pair");
  }
  for (std::size_t k = 0; k < circuit.loops.size(); ++k) {
    const auto& loop = circuit.loops[k];
    for (std::size_t l = 0; l < 4; ++l) {
      const auto& b = loop.branches[l];
      const std::string where =
          "loop " + std::to_string(k) + " branch " + std::to_string(l);
      switch (b.kind) {
        case BranchKind::Capacitor:
          if (!(b.capacitance > 0.0))
            throw std::invalid_argument(where + ": capacitance must be positive");
          break;
        case BranchKind::Inductor:
          if (!(b.inductance > 0.0))
            throw std::invalid_argument(where + ": inductance must be positive");
          break;
        case BranchKind::JosephsonJunction:
          if (!(b.junction_capacitance > 0.0))
            throw std::invalid_argument(where + ": junction capacitance must be positive");
          if (!(b.josephson_energy > 0.0))
            throw std::invalid_argument(where + ": josephson energy must be positive");
          break;
        case BranchKind::Absent:
          break;
      }
    }
  }
  for (std::size_t k = 0; k < circuit.coupling_capacitances.size(); ++k) {
    if (!(circuit.coupling_capacitances[k] > 0.0)) {
      throw std::invalid_argument("coupling capacitor " + std::to_string(k) +
                                  " must be positive");
    }
  }
}

std::vector<LoopTopology> enumerate_single_loop_topologies(
    const DefaultComponentValues& values) {
  const std::array<BranchKind, 4> kinds = {
      BranchKind::Capacitor, BranchKind::Inductor,
      BranchKind::JosephsonJunction, BranchKind::Absent};
  std::vector<LoopTopology> result;
  for (int code = 0; code < 256; ++code) {
    LoopTopology topo;
    int c = code;
    for (int l = 0; l < 4; ++l) {
      BranchKind kind = kinds[c % 4];
      c /= 4;
      switch (kind) {
        case BranchKind::Capacitor:
          topo.branches[l] = BranchSpec::capacitor(values.capacitance);
          break;
        case BranchKind::Inductor:
          topo.branches[l] = BranchSpec::inductor(values.inductance);
          break;
        case BranchKind::JosephsonJunction:
          topo.branches[l] = BranchSpec::junction(values.junction_capacitance,
                                                  values.josephson_energy);
          break;
        case BranchKind::Absent:
          topo.branches[l] = BranchSpec::absent();
          break;
      }
    }
    if (validate_topology(topo).valid) result.push_back(topo);
  }
  return result;
}

int topology_code(const LoopTopology& topology) {
  int code = 0;
  for (int l = 3; l >= 0; --l) {
    code = code * 4 + static_cast<int>(topology.branches[l].kind);
  }
  return code;
}

}  // namespace circuitforge
