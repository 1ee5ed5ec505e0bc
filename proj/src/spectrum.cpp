#include "circuitforge/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace circuitforge {

double SpectrumReport::transition(int i, int j) const {
  if (i >= level_count() || j >= level_count() || i < 0 || j < 0) {
    throw InsufficientLevelsError("transition index exceeds computed levels");
  }
  return levels(i) - levels(j);
}

const Eigen::MatrixXcd& SpectrumReport::elements(const std::string& label) const {
  auto it = matrix_elements.find(label);
  if (it == matrix_elements.end()) {
    throw UnknownOperatorError("no elements tabulated for label: " + label);
  }
  return it->second;
}

double SpectrumReport::element_magnitude(const std::string& label, int i,
                                         int j) const {
  return std::abs(elements(label)(i, j));
}

namespace {

void fix_gauge(Eigen::MatrixXcd& vectors) {
  for (int c = 0; c < vectors.cols(); ++c) {
    int imax = 0;
    double best = -1.0;
    for (int r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best) {
        best = a;
        imax = r;
      }
    }
    const Complex z = vectors(imax, c);
    if (std::abs(z) > 0.0) vectors.col(c) *= std::conj(z) / std::abs(z);
  }
}

}  // namespace

Eigen::MatrixXcd matrix_elements(const QuantizedSystem& system,
                                 const Eigensystem& eigen,
                                 const std::string& operator_label,
                                 double cluster_tol) {
  const SparseMatrixXcd op = system.operator_by_label(operator_label);
  Eigen::MatrixXcd vecs = eigen.vectors;
  fix_gauge(vecs);

  const int k = static_cast<int>(vecs.cols());
  const double scale =
      std::max(eigen.values.cwiseAbs().maxCoeff(), 1.0);
  // Rotate inside each degenerate cluster so the operator is diagonal
  // there; the arbitrary mixing a solver returns would otherwise make
  // intra-cluster elements seed-dependent.
  int start = 0;
  while (start < k) {
    int end = start + 1;
    while (end < k &&
           std::abs(eigen.values(end) - eigen.values(end - 1)) < cluster_tol * scale) {
      ++end;
    }
    if (end - start > 1) {
      Eigen::MatrixXcd block =
          vecs.middleCols(start, end - start).adjoint() *
          (op * vecs.middleCols(start, end - start));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
          0.5 * (block + block.adjoint()));
      vecs.middleCols(start, end - start) =
          (vecs.middleCols(start, end - start) * es.eigenvectors()).eval();
      fix_gauge(vecs);
    }
    start = end;
  }
  return vecs.adjoint() * (op * vecs);
}

SpectrumReport spectrum_report(const QuantizedSystem& system, int k,
                               const std::vector<std::string>& operator_labels,
                               const EigensolveOptions& options) {
  SpectrumReport report;
  const int kk = std::min(k, system.dimension());
  Eigensystem eigen = eigensystem(system.hamiltonian, kk, options);
  report.levels = eigen.values;
  for (const auto& label : operator_labels) {
    report.matrix_elements[label] = matrix_elements(system, eigen, label);
  }
  return report;
}

double anharmonicity(const SpectrumReport& report, std::pair<int, int> ij,
                     std::pair<int, int> kl) {
  const double wij = report.transition(ij.first, ij.second);
  const double wkl = report.transition(kl.first, kl.second);
  if (std::abs(wkl) < 1e-6 || std::abs(wij + wkl) < 1e-6) {
    throw DegenerateDenominatorError("anharmonicity denominator below 1e-6 Hz");
  }
  return (wij - wkl) / (wij + wkl);
}

double transition_ratio(const SpectrumReport& report, std::pair<int, int> jk,
                        std::pair<int, int> lm) {
  if (jk.first <= jk.second || lm.first <= lm.second) {
    throw std::invalid_argument("ratio indices must be ordered j>k, l>m");
  }
  const double num = report.transition(jk.first, jk.second);
  const double den = report.transition(lm.first, lm.second);
  if (std::abs(den) < 1e-6) {
    throw DegenerateDenominatorError("transition ratio denominator below 1e-6 Hz");
  }
  return num / den;
}

}  // namespace circuitforge
