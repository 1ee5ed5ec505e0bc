#pragma once

#include <map>
#include <string>
#include <vector>

#include "circuitforge/eigensolver.hpp"
#include "circuitforge/quantize.hpp"

namespace circuitforge {

struct InsufficientLevelsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateDenominatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Figures of merit of one diagonalized system.  Levels are cyclic
// frequencies (hertz), ascending; matrix elements are stored per operator
// label in the fixed eigenvector gauge.
struct SpectrumReport {
  Eigen::VectorXd levels;
  std::map<std::string, Eigen::MatrixXcd> matrix_elements;

  int level_count() const { return static_cast<int>(levels.size()); }
  // omega_ij = omega_i - omega_j (hertz).
  double transition(int i, int j) const;
  const Eigen::MatrixXcd& elements(const std::string& label) const;
  double element_magnitude(const std::string& label, int i, int j) const;
};

// Eigenvectors are gauge-fixed so the largest-magnitude component of each
// is real positive.  Within each eigenvalue cluster (relative gap below
// cluster_tol) the operator is diagonalized inside the cluster before
// elements are reported, so degenerate doublets give deterministic values.
Eigen::MatrixXcd matrix_elements(const QuantizedSystem& system,
                                 const Eigensystem& eigen,
                                 const std::string& operator_label,
                                 double cluster_tol = 1e-6);

// Diagonalize and tabulate elements of the requested operators for the
// lowest k levels.
SpectrumReport spectrum_report(const QuantizedSystem& system, int k,
                               const std::vector<std::string>& operator_labels,
                               const EigensolveOptions& options = {});

// A_{ij,kl} = (w_ij - w_kl) / (w_ij + w_kl).
double anharmonicity(const SpectrumReport& report, std::pair<int, int> ij,
                     std::pair<int, int> kl);

// R_{jk,lm} = (w_j - w_k)/(w_l - w_m), indices ordered so j>k, l>m => R >= 0.
double transition_ratio(const SpectrumReport& report, std::pair<int, int> jk,
                        std::pair<int, int> lm);

}  // namespace circuitforge
