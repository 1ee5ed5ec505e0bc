#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "circuitforge/operators.hpp"

namespace circuitforge {

struct EigensolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Eigensystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // one column per value
};

struct EigensolveOptions {
  double tolerance = 3e-10;       // residual / ||H||
  int dense_threshold = 1100;     // below this, always dense
  int dense_fallback_limit = 9000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  int max_basis = 320;
  int max_restarts = 16;
};

// Lowest k eigenpairs of a Hermitian matrix.  Small problems are solved
// densely; larger ones with block Lanczos (full reorthogonalization, thick
// restart), falling back to the dense path if the iteration stalls.
// Residuals satisfy ||H v - w v|| <= tol * ||H||.
Eigensystem eigensystem(const SparseMatrixXcd& h, int k,
                        const EigensolveOptions& options = {});

Eigen::VectorXd lowest_eigenvalues(const SparseMatrixXcd& h, int k,
                                   const EigensolveOptions& options = {});

}  // namespace circuitforge
