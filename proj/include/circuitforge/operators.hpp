#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <stdexcept>
#include <vector>

namespace circuitforge {

using Complex = std::complex<double>;
using SparseMatrixXcd = Eigen::SparseMatrix<Complex>;

struct MissingInductanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BasisChoice {
  enum class Type { Charge, Fock };
  Type type = Type::Charge;
  // Charge: n_max (dimension 2 n_max + 1).  Fock: m_max (dimension m_max + 1).
  int cutoff = 1;

  int dimension() const {
    return type == Type::Charge ? 2 * cutoff + 1 : cutoff + 1;
  }
};

// Truncated single-node operators.
//
// Charge basis: number_op = diag(-n_max..n_max) and exp_i_phi is the lower
// shift |N+1><N|, so [N, e^{i phi}] = e^{i phi} exactly away from the
// truncation edge.
//
// Fock basis: phi_op = (2 E_C/E_L)^{1/4} (a + a^dag) and
// number_op = (E_L/(32 E_C))^{1/4} i (a^dag - a); [phi, N] = i holds on the
// interior block.
struct NodeOperators {
  BasisChoice basis;
  Eigen::MatrixXcd number_op;
  Eigen::MatrixXcd phase_op;   // Fock only: phi operator
  Eigen::MatrixXcd exp_i_phi;  // e^{+i phi} in either basis
  // Exact projections of N^2 and phi^2.  Squaring the truncated factors
  // instead would corrupt the edge level and push an intruder eigenvalue
  // into the low spectrum.
  Eigen::MatrixXcd number_sq;
  Eigen::MatrixXcd phase_sq;   // Fock only
  double phi_zero_point = 0.0;
  double number_zero_point = 0.0;

  int dimension() const { return static_cast<int>(number_op.rows()); }
};

NodeOperators build_node_operators(const BasisChoice& choice, double ec_ll,
                                   double el_ll);

// exp(i c phi) for c in {-1, +1}; charge basis uses the shift operator
// convention, Fock the spectral decomposition of phi_op.
Eigen::MatrixXcd exp_phase(const NodeOperators& ops, int coefficient);

// Kronecker product of sparse operands (A tensor B).
SparseMatrixXcd sparse_kron(const SparseMatrixXcd& a, const SparseMatrixXcd& b);

SparseMatrixXcd sparse_identity(int n);

// Lift per-node factors (empty entry = identity) to the full tensor space,
// in the declared node order.
SparseMatrixXcd lift_product(const std::vector<const Eigen::MatrixXcd*>& factors,
                             const std::vector<int>& dims);

}  // namespace circuitforge
