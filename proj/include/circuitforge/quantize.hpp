#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circuitforge/network.hpp"
#include "circuitforge/operators.hpp"

namespace circuitforge {

struct DimensionOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownOperatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-node Hilbert-space cutoffs.  When per_node is set it overrides the
// uniform defaults (flattened over loops in declared node order).
struct TruncationPolicy {
  int charge_n_max = 10;
  int fock_m_max = 12;
  std::optional<std::vector<int>> per_node;
  int dimension_cap = 200000;

  static TruncationPolicy uniform(int m) {
    TruncationPolicy p;
    p.charge_n_max = m;
    p.fock_m_max = m;
    return p;
  }
};

// Coordinates of one active node inside a chain.
struct NodeAddress {
  int loop = 0;
  int node_label = 0;  // original node index 0..2 within the loop
};

struct QuantizedSystem {
  SparseMatrixXcd hamiltonian;  // hertz, Hermitian
  std::vector<NodeOperators> node_ops;
  std::vector<int> dims;
  std::vector<NodeAddress> addresses;
  std::vector<int> loop_first_node;  // index into node_ops per loop, -1 if none

  int dimension() const { return static_cast<int>(hamiltonian.rows()); }
  int node_count() const { return static_cast<int>(node_ops.size()); }

  // Operator of one node lifted to the full tensor space.
  SparseMatrixXcd lifted_number_operator(int node) const;
  SparseMatrixXcd lifted_phase_operator(int node) const;

  // Named operators: charge-edge-left, charge-edge-right, phase-edge-left,
  // phase-edge-right, charge-node-<i>, phase-node-<i>.
  SparseMatrixXcd operator_by_label(const std::string& label) const;
  int edge_node(bool left) const;
};

// Quartic-expansion basis choice for one node of the reduced Hamiltonian:
// no junction on the node -> Fock; junction plus inductive energy
// (fluxonium-like) -> Fock; junction without inductance -> Charge.
// Evaluated structurally from the coefficient data.
BasisChoice::Type select_basis(const HamiltonianSpec& spec, int node);

std::vector<BasisChoice> choose_bases(const HamiltonianSpec& spec,
                                      const TruncationPolicy& truncation,
                                      int node_offset = 0);

// Full Hermitian Hamiltonian of one reduced loop:
// H = 4 N^T E_C N + phi^T E_L phi / 2 - sum E_J cos(c . phi - offset),
// assembled by tensor products in the declared node order.
QuantizedSystem assemble_hamiltonian(const HamiltonianSpec& spec,
                                     const std::vector<BasisChoice>& bases,
                                     int dimension_cap = 200000);

QuantizedSystem assemble_hamiltonian(const HamiltonianSpec& spec,
                                     const TruncationPolicy& truncation = {});

// Chain Hamiltonian per the capacitive-coupling rule: loop k couples
// through its rightmost active node to loop k+1's leftmost active node,
// H += 4 E_Cc N_k N_{k+1} with E_Cc = e^2/C_c.  Loops reduced to zero
// active nodes contribute only their constant energy.
QuantizedSystem assemble_chain_hamiltonian(const ChainCircuit& circuit,
                                           const TruncationPolicy& truncation = {});

struct ConvergenceReport {
  std::vector<int> m_values;
  // relative_errors[i] holds eps_{r,n} for the four lowest levels at
  // m_values[i], comparing m against m+1.
  std::vector<std::array<double, 4>> relative_errors;
  std::optional<int> converged_m;  // smallest m with max_n eps below tolerance
  double tolerance = 1e-3;
};

ConvergenceReport convergence_study(const ChainCircuit& circuit, int m_min,
                                    int m_max, double tolerance = 1e-3);

// Per-node starting cutoffs sized from the node physics: charge lattices
// from the zero-point charge spread, junction-carrying oscillator nodes
// from the well reach in zero-point units.
std::vector<int> auto_node_cutoffs(const ChainCircuit& circuit);

// Scales the per-node cutoffs geometrically until the lowest `levels`
// transition frequencies move less than rel_tol of the spectral span, then
// returns the last stable policy.
TruncationPolicy converged_truncation(const ChainCircuit& circuit,
                                      int levels = 4, double rel_tol = 1e-4,
                                      int m_start = 12, int m_limit = 96);

}  // namespace circuitforge
