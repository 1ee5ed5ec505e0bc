#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace circuitforge {

enum class BranchKind : std::uint8_t {
  Capacitor,
  Inductor,
  JosephsonJunction,
  Absent,
};

// One link of the four-branch loop.  The kind encodes the one-hot
// (alpha, beta, gamma) triple; Absent means the link is a plain wire.
// Component values are SI: farads, henries, and hertz for the Josephson
// energy E_J/h.
struct BranchSpec {
  BranchKind kind = BranchKind::Absent;
  double capacitance = 0.0;
  double inductance = 0.0;
  double junction_capacitance = 0.0;
  double josephson_energy = 0.0;

  static BranchSpec capacitor(double farads);
  static BranchSpec inductor(double henries);
  static BranchSpec junction(double farads, double hertz);
  static BranchSpec absent() { return BranchSpec{}; }

  bool operator==(const BranchSpec&) const = default;
};

// Fixed incidence: B0 ground-node0, B1 node0-node1, B2 node1-node2,
// B3 node2-ground.  external_phase is the reduced flux 2*pi*Phi_x/Phi_0,
// not wrapped (sweeps may exceed +-2*pi).
struct LoopTopology {
  std::array<BranchSpec, 4> branches{};
  double external_phase = 0.0;

  bool operator==(const LoopTopology&) const = default;
};

// Linear array of loops, neighbours joined by coupling capacitors (farads).
struct ChainCircuit {
  std::vector<LoopTopology> loops;
  std::vector<double> coupling_capacitances;

  static ChainCircuit single(LoopTopology loop) {
    return ChainCircuit{{std::move(loop)}, {}};
  }
  bool operator==(const ChainCircuit&) const = default;
};

enum class ValidityReason : std::uint8_t {
  OnlyCapacitive,
  OnlyInductive,
  AllAbsent,
  Valid,
};

struct ValidityReport {
  bool valid = false;
  ValidityReason reason = ValidityReason::AllAbsent;
};

const char* to_string(ValidityReason reason);

// A loop has a quantum Hamiltonian unless its present elements are all
// capacitors, all inductors, or it is empty.  Any junction validates the
// loop on its own, as does a capacitor/inductor pair.
ValidityReport validate_topology(const LoopTopology& topology);

ValidityReport validate_circuit(const ChainCircuit& circuit);

// Throws std::invalid_argument on non-positive component values or
// malformed chains (couplings must number loops-1 and be positive).
void check_component_values(const ChainCircuit& circuit);

// All 225 valid kind assignments of the four branches, with every present
// component set to the given placeholder values.
struct DefaultComponentValues {
  double capacitance = 1e-13;
  double inductance = 1e-9;
  double junction_capacitance = 1e-14;
  double josephson_energy = 1e10;
};

std::vector<LoopTopology> enumerate_single_loop_topologies(
    const DefaultComponentValues& values = {});

// Kind assignment of a topology packed into one integer (base-4 digits),
// handy as a memoization key.
int topology_code(const LoopTopology& topology);

}  // namespace circuitforge
