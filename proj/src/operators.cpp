#include "circuitforge/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace circuitforge {

NodeOperators build_node_operators(const BasisChoice& choice, double ec_ll,
                                   double el_ll) {
  NodeOperators ops;
  ops.basis = choice;
  const int d = choice.dimension();
  if (choice.type == BasisChoice::Type::Charge) {
    ops.number_op = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      ops.number_op(i, i) = static_cast<double>(i - choice.cutoff);
    }
    ops.exp_i_phi = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) ops.exp_i_phi(i + 1, i) = 1.0;
    ops.number_sq = ops.number_op * ops.number_op;
  } else {
    if (!(el_ll > 0.0)) {
      throw MissingInductanceError(
          "Fock basis requires a positive diagonal inductive energy");
    }
    ops.phi_zero_point = std::pow(2.0 * ec_ll / el_ll, 0.25);
    ops.number_zero_point = std::pow(el_ll / (32.0 * ec_ll), 0.25);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) a(i, i + 1) = std::sqrt(i + 1.0);
    const Eigen::MatrixXcd adag = a.adjoint();
    ops.phase_op = ops.phi_zero_point * (adag + a);
    ops.number_op = ops.number_zero_point * Complex(0.0, 1.0) * (adag - a);
    // N^2 = Nzp^2 (2 a^dag a + 1 - a^dag^2 - a^2), phi^2 with + signs
    Eigen::MatrixXcd two_n_plus_1 = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd ladder_sq = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) two_n_plus_1(i, i) = 2.0 * i + 1.0;
    for (int i = 0; i + 2 < d; ++i) {
      const double amp = std::sqrt((i + 1.0) * (i + 2.0));
      ladder_sq(i, i + 2) = amp;
      ladder_sq(i + 2, i) = amp;
    }
    const double nzp2 = ops.number_zero_point * ops.number_zero_point;
    const double pzp2 = ops.phi_zero_point * ops.phi_zero_point;
    ops.number_sq = nzp2 * (two_n_plus_1 - ladder_sq);
    ops.phase_sq = pzp2 * (two_n_plus_1 + ladder_sq);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ops.phase_op);
    Eigen::VectorXcd phases(d);
    for (int i = 0; i < d; ++i) {
      phases(i) = std::exp(Complex(0.0, es.eigenvalues()(i)));
    }
    ops.exp_i_phi = es.eigenvectors() * phases.asDiagonal() *
                    es.eigenvectors().adjoint();
  }
  return ops;
}

Eigen::MatrixXcd exp_phase(const NodeOperators& ops, int coefficient) {
  if (coefficient == 1) return ops.exp_i_phi;
  return ops.exp_i_phi.adjoint();
}

SparseMatrixXcd sparse_kron(const SparseMatrixXcd& a, const SparseMatrixXcd& b) {
  SparseMatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros()) * b.nonZeros());
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseMatrixXcd::InnerIterator ia(a, ka); ia; ++ia) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseMatrixXcd::InnerIterator ib(b, kb); ib; ++ib) {
          trips.emplace_back(ia.row() * b.rows() + ib.row(),
                             ia.col() * b.cols() + ib.col(),
                             ia.value() * ib.value());
        }
      }
    }
  }
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseMatrixXcd sparse_identity(int n) {
  SparseMatrixXcd id(n, n);
  id.setIdentity();
  return id;
}

SparseMatrixXcd lift_product(const std::vector<const Eigen::MatrixXcd*>& factors,
                             const std::vector<int>& dims) {
  SparseMatrixXcd acc(1, 1);
  acc.insert(0, 0) = 1.0;
  for (std::size_t l = 0; l < dims.size(); ++l) {
    if (factors[l] == nullptr) {
      acc = sparse_kron(acc, sparse_identity(dims[l]));
    } else {
      acc = sparse_kron(acc, factors[l]->sparseView(1.0, 1e-14));
    }
  }
  return acc;
}

}  // namespace circuitforge
