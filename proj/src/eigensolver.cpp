#include "circuitforge/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace circuitforge {

namespace {

Eigensystem dense_solve(const SparseMatrixXcd& h, int k) {
  Eigen::MatrixXcd dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  if (es.info() != Eigen::Success) {
    throw EigensolveError("dense Hermitian eigensolver failed");
  }
  Eigensystem out;
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  return out;
}

// Gram-Schmidt against the accumulated basis, twice, then QR of the block.
// Returns the rank of the orthonormalized block.
int orthonormalize(Eigen::MatrixXcd& block, const Eigen::MatrixXcd& basis,
                   int basis_cols) {
  for (int pass = 0; pass < 2; ++pass) {
    if (basis_cols > 0) {
      block.noalias() -= basis.leftCols(basis_cols) *
                         (basis.leftCols(basis_cols).adjoint() * block);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
  Eigen::MatrixXcd r = qr.matrixQR()
                           .topRows(block.cols())
                           .triangularView<Eigen::Upper>();
  Eigen::MatrixXcd q = qr.householderQ() *
      Eigen::MatrixXcd::Identity(block.rows(), block.cols());
  int rank = 0;
  const double scale = std::max(r.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  for (int i = 0; i < block.cols(); ++i) {
    if (std::abs(r(i, i)) > 1e-10 * scale) ++rank;
  }
  block = q;
  return rank;
}

struct LanczosResult {
  bool converged = false;
  Eigensystem sys;
};

LanczosResult block_lanczos(const SparseMatrixXcd& h, int k,
                            const EigensolveOptions& opt) {
  const int n = static_cast<int>(h.rows());
  // Restarting collapses the basis onto the leading Ritz block, so the
  // block must be wide enough to carry every wanted direction through,
  // plus a buffer that keeps the edge pair converging.
  const int b = std::min(std::min(k + 3, 14), n);
  const int mmax = std::min(n, std::max(opt.max_basis, 6 * k + 6 * b));

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd basis(n, mmax + b);
  Eigen::MatrixXcd block(n, b);
  for (int j = 0; j < b; ++j) {
    for (int i = 0; i < n; ++i) block(i, j) = Complex(gauss(rng), gauss(rng));
  }

  LanczosResult result;
  double norm_estimate = 0.0;

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    int cols = 0;
    if (orthonormalize(block, basis, 0) < b) {
      for (int j = 0; j < b; ++j) {
        for (int i = 0; i < n; ++i) {
          block(i, j) = Complex(gauss(rng), gauss(rng));
        }
      }
      orthonormalize(block, basis, 0);
    }
    basis.leftCols(b) = block;
    cols = b;

    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(mmax + b, mmax + b);
    // Thick restart: fold previously locked Ritz values into T's corner.
    while (cols + b <= mmax + b) {
      Eigen::MatrixXcd w = h * basis.middleCols(cols - b, b);
      Eigen::MatrixXcd proj = basis.leftCols(cols).adjoint() * w;
      t.block(0, cols - b, cols, b) = proj;
      t.block(cols - b, 0, b, cols) = proj.adjoint().eval().topRows(b);
      w.noalias() -= basis.leftCols(cols) * proj;
      // second reorthogonalization pass
      Eigen::MatrixXcd proj2 = basis.leftCols(cols).adjoint() * w;
      w.noalias() -= basis.leftCols(cols) * proj2;

      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(w);
      Eigen::MatrixXcd r = qr.matrixQR().topRows(b).triangularView<Eigen::Upper>();
      Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, b);
      // A rank-deficient w leaves Householder directions that are not
      // orthogonal to the basis; scrub and re-factor.
      for (int pass = 0; pass < 2; ++pass) {
        q.noalias() -= basis.leftCols(cols) * (basis.leftCols(cols).adjoint() * q);
      }
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr2(q);
      q = qr2.householderQ() * Eigen::MatrixXcd::Identity(n, b);

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> tes(
          t.topLeftCorner(cols, cols));
      norm_estimate = std::max(norm_estimate,
                               tes.eigenvalues().cwiseAbs().maxCoeff());
      const double floor =
          std::max(norm_estimate, 1e-300);
      if (cols >= k + b) {
        // Residual of Ritz pair i: ||R * S_bottom(:, i)||.
        Eigen::MatrixXcd bottom =
            r * tes.eigenvectors().bottomRows(b).leftCols(std::min(cols, k));
        bool all_ok = true;
        for (int i = 0; i < std::min(cols, k); ++i) {
          if (bottom.col(i).norm() > opt.tolerance * floor) {
            all_ok = false;
            break;
          }
        }
        if (all_ok) {
          result.converged = true;
          result.sys.values = tes.eigenvalues().head(k);
          result.sys.vectors = basis.leftCols(cols) * tes.eigenvectors().leftCols(k);
          return result;
        }
      }

      basis.middleCols(cols, b) = q;
      t.block(cols, cols - b, b, b) = r;
      t.block(cols - b, cols, b, b) = r.adjoint();
      cols += b;
    }

    // Restart from the lowest Ritz vectors.  Only the first cols-b columns
    // of T are completed; the final appended block never had its
    // projections taken and would poison the Ritz basis.
    const int done = cols - b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> tes(
        t.topLeftCorner(done, done));
    block = basis.leftCols(done) * tes.eigenvectors().leftCols(b);
  }
  return result;
}

}  // namespace

Eigensystem eigensystem(const SparseMatrixXcd& h, int k,
                        const EigensolveOptions& options) {
  const int n = static_cast<int>(h.rows());
  if (k < 1 || k > n) {
    throw EigensolveError("requested eigenpair count exceeds the dimension");
  }
  if (n <= options.dense_threshold || 3 * k + 12 >= n) {
    return dense_solve(h, k);
  }
  auto lr = block_lanczos(h, k, options);
  if (lr.converged) return lr.sys;
  if (n <= options.dense_fallback_limit) {
    return dense_solve(h, k);
  }
  throw EigensolveError(
      "iterative eigensolver stalled and the matrix is too large for the "
      "dense fallback");
}

Eigen::VectorXd lowest_eigenvalues(const SparseMatrixXcd& h, int k,
                                   const EigensolveOptions& options) {
  return eigensystem(h, k, options).values;
}

}  // namespace circuitforge
