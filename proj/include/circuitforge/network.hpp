#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

#include "circuitforge/circuit.hpp"

namespace circuitforge {

struct DegenerateNetworkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One cosine term -E_J cos(sum_l c_l phi_l - flux_offset).  Coefficients
// are over the network's active nodes, entries in {-1, 0, +1} with at most
// two nonzeros (branch phase differences).
struct JosephsonTerm {
  double energy = 0.0;  // E_J/h [Hz]
  Eigen::VectorXi phase_coefficients;
  double flux_offset = 0.0;  // radians
};

// Affine substitution produced by passive-node elimination: the eliminated
// coordinate (or velocity) equals coefficients . (remaining actives).
struct EliminationRecord {
  enum class Kind { Coordinate, Velocity, Spectator, Gauge };
  Kind kind = Kind::Spectator;
  int node = -1;  // original node label
  std::vector<int> basis;          // labels the coefficients refer to
  Eigen::VectorXd coefficients;
};

struct ReducedNetwork {
  std::vector<int> active_nodes;   // original labels, ascending
  Eigen::MatrixXd c_matrix;        // farads
  Eigen::MatrixXd linv_matrix;     // 1/henries
  std::vector<JosephsonTerm> josephson_terms;
  std::vector<EliminationRecord> elimination_maps;
};

// Classical Hamiltonian data after the Legendre transform, all energies as
// cyclic frequencies (E/h, hertz).
struct HamiltonianSpec {
  Eigen::MatrixXd charge_energy;      // E_C = e^2 C^-1 / 2
  Eigen::MatrixXd inductive_energy;   // E_L = Phi0^2 L^-1 / (2 pi)^2
  std::vector<JosephsonTerm> josephson_terms;
  std::vector<bool> node_has_inductance;
  std::vector<int> node_labels;

  int size() const { return static_cast<int>(node_labels.size()); }
};

// Raw 3x3 node matrices of the fully-populated loop: tridiagonal with
// diagonal C_sum_l + C_sum_{l+1} and off-diagonal -C_sum_{l+1}, where
// C_sum_l = alpha_l C_l + gamma_l C_Jl, and likewise 1/L_sum_l = beta_l/L_l.
std::pair<Eigen::Matrix3d, Eigen::Matrix3d> build_matrices(
    const LoopTopology& topology);

// Index of the closure branch (first l with a junction), or nullopt.  The
// closure junction's phase argument gains the offset -phi_x.
std::optional<int> apply_fluxoid_rule(const LoopTopology& topology);

// Node-variable quadratic forms of one loop. Absent branches are wired
// connections, so their endpoints are identified before the forms are
// accumulated; junction phase arguments follow the branch orientation of
// the loop Lagrangian.
ReducedNetwork build_network(const LoopTopology& topology);

// Removes coordinate-only nodes (zero kinetic row) via dL/dphi = 0,
// velocity-only nodes (zero potential row, no junction) via dL/dphidot = 0,
// fully decoupled spectators, and potential-free null directions of the
// capacitance matrix (gauge pinning).  Idempotent; the result has a
// positive definite c_matrix.
ReducedNetwork eliminate_passive_nodes(const ReducedNetwork& network);

// E_C = e^2 C^-1/2, E_L = Phi0^2 Linv/(2 pi)^2; junction terms carry over
// with their sign flipped into the potential.  Requires positive definite
// c_matrix (run eliminate_passive_nodes first).
HamiltonianSpec legendre_transform(const ReducedNetwork& network);

// build_network + eliminate + legendre in one call.
HamiltonianSpec reduce_loop(const LoopTopology& topology);

}  // namespace circuitforge
