#include "circuitforge/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "circuitforge/constants.hpp"
#include "circuitforge/eigensolver.hpp"

namespace circuitforge {

namespace {

bool node_has_quartic(const HamiltonianSpec& spec, int node) {
  for (const auto& t : spec.josephson_terms) {
    if (t.phase_coefficients(node) != 0) return true;
  }
  return false;
}

void add_term(std::vector<Eigen::Triplet<Complex>>& trips,
              const SparseMatrixXcd& op, Complex scale) {
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseMatrixXcd::InnerIterator it(op, k); it; ++it) {
      trips.emplace_back(it.row(), it.col(), scale * it.value());
    }
  }
}

}  // namespace

BasisChoice::Type select_basis(const HamiltonianSpec& spec, int node) {
  if (!node_has_quartic(spec, node)) return BasisChoice::Type::Fock;
  if (spec.node_has_inductance[node]) return BasisChoice::Type::Fock;
  return BasisChoice::Type::Charge;
}

std::vector<BasisChoice> choose_bases(const HamiltonianSpec& spec,
                                      const TruncationPolicy& truncation,
                                      int node_offset) {
  std::vector<BasisChoice> bases;
  for (int l = 0; l < spec.size(); ++l) {
    BasisChoice choice;
    choice.type = select_basis(spec, l);
    if (truncation.per_node) {
      choice.cutoff = truncation.per_node->at(node_offset + l);
    } else {
      choice.cutoff = choice.type == BasisChoice::Type::Charge
                          ? truncation.charge_n_max
                          : truncation.fock_m_max;
    }
    bases.push_back(choice);
  }
  return bases;
}

SparseMatrixXcd QuantizedSystem::lifted_number_operator(int node) const {
  std::vector<const Eigen::MatrixXcd*> factors(node_ops.size(), nullptr);
  factors[node] = &node_ops[node].number_op;
  return lift_product(factors, dims);
}

SparseMatrixXcd QuantizedSystem::lifted_phase_operator(int node) const {
  if (node_ops[node].basis.type != BasisChoice::Type::Fock) {
    throw UnknownOperatorError(
        "phase operator is only defined for Fock-basis nodes");
  }
  std::vector<const Eigen::MatrixXcd*> factors(node_ops.size(), nullptr);
  factors[node] = &node_ops[node].phase_op;
  return lift_product(factors, dims);
}

int QuantizedSystem::edge_node(bool left) const {
  if (node_ops.empty()) {
    throw UnknownOperatorError("system has no active nodes");
  }
  return left ? 0 : node_count() - 1;
}

SparseMatrixXcd QuantizedSystem::operator_by_label(
    const std::string& label) const {
  auto parse_index = [&](const std::string& prefix) -> int {
    return std::stoi(label.substr(prefix.size()));
  };
  if (label == "charge-edge-left") return lifted_number_operator(edge_node(true));
  if (label == "charge-edge-right") return lifted_number_operator(edge_node(false));
  if (label == "phase-edge-left") return lifted_phase_operator(edge_node(true));
  if (label == "phase-edge-right") return lifted_phase_operator(edge_node(false));
  if (label.starts_with("charge-node-")) {
    const int i = parse_index("charge-node-");
    if (i < 0 || i >= node_count()) throw UnknownOperatorError("node index out of range: " + label);
    return lifted_number_operator(i);
  }
  if (label.starts_with("phase-node-")) {
    const int i = parse_index("phase-node-");
    if (i < 0 || i >= node_count()) throw UnknownOperatorError("node index out of range: " + label);
    return lifted_phase_operator(i);
  }
  throw UnknownOperatorError("unknown operator label: " + label);
}

QuantizedSystem assemble_hamiltonian(const HamiltonianSpec& spec,
                                     const std::vector<BasisChoice>& bases,
                                     int dimension_cap) {
  const int n = spec.size();
  QuantizedSystem sys;
  double log_dim = 0.0;
  for (const auto& b : bases) log_dim += std::log2(double(b.dimension()));
  if (log_dim > std::log2(double(dimension_cap))) {
    throw DimensionOverflowError("tensor dimension exceeds the configured cap");
  }
  for (int l = 0; l < n; ++l) {
    sys.node_ops.push_back(build_node_operators(
        bases[l], spec.charge_energy(l, l), spec.inductive_energy(l, l)));
    sys.dims.push_back(bases[l].dimension());
    sys.addresses.push_back({0, spec.node_labels[l]});
  }
  sys.loop_first_node = {n > 0 ? 0 : -1};

  const int dim = n == 0 ? 1 : [&] {
    int d = 1;
    for (int x : sys.dims) d *= x;
    return d;
  }();

  std::vector<Eigen::Triplet<Complex>> trips;

  if (n == 0) {
    double constant = 0.0;
    for (const auto& t : spec.josephson_terms) {
      constant -= t.energy * std::cos(t.flux_offset);
    }
    SparseMatrixXcd h(1, 1);
    if (constant != 0.0) h.insert(0, 0) = constant;
    sys.hamiltonian = h;
    return sys;
  }

  auto lift_one = [&](const Eigen::MatrixXcd& m, int at) {
    std::vector<const Eigen::MatrixXcd*> factors(n, nullptr);
    factors[at] = &m;
    return lift_product(factors, sys.dims);
  };
  auto lift_two = [&](const Eigen::MatrixXcd& a, int ai,
                      const Eigen::MatrixXcd& b, int bi) {
    std::vector<const Eigen::MatrixXcd*> factors(n, nullptr);
    factors[ai] = &a;
    factors[bi] = &b;
    return lift_product(factors, sys.dims);
  };

  // Kinetic 4 N^T E_C N.
  for (int i = 0; i < n; ++i) {
    add_term(trips, lift_one(sys.node_ops[i].number_sq, i),
             4.0 * spec.charge_energy(i, i));
    for (int j = i + 1; j < n; ++j) {
      if (spec.charge_energy(i, j) == 0.0) continue;
      add_term(trips,
               lift_two(sys.node_ops[i].number_op, i, sys.node_ops[j].number_op, j),
               8.0 * spec.charge_energy(i, j));
    }
  }

  // Inductive phi^T E_L phi / 2 (Fock nodes only; charge nodes carry no
  // inductive row by construction).
  for (int i = 0; i < n; ++i) {
    if (sys.node_ops[i].basis.type != BasisChoice::Type::Fock) continue;
    if (spec.inductive_energy(i, i) != 0.0) {
      add_term(trips, lift_one(sys.node_ops[i].phase_sq, i),
               0.5 * spec.inductive_energy(i, i));
    }
    for (int j = i + 1; j < n; ++j) {
      if (sys.node_ops[j].basis.type != BasisChoice::Type::Fock) continue;
      if (spec.inductive_energy(i, j) == 0.0) continue;
      add_term(trips,
               lift_two(sys.node_ops[i].phase_op, i, sys.node_ops[j].phase_op, j),
               spec.inductive_energy(i, j));
    }
  }

  // Josephson cosines: -E_J cos(sum c phi - offset) as the Hermitian part
  // of e^{-i offset} prod_l exp(i c_l phi_l).
  for (const auto& t : spec.josephson_terms) {
    std::vector<Eigen::MatrixXcd> local;
    std::vector<const Eigen::MatrixXcd*> factors(n, nullptr);
    local.reserve(2);
    for (int l = 0; l < n; ++l) {
      if (t.phase_coefficients(l) == 0) continue;
      local.push_back(exp_phase(sys.node_ops[l], t.phase_coefficients(l)));
      factors[l] = &local.back();
    }
    SparseMatrixXcd e = lift_product(factors, sys.dims);
    const Complex phase = std::exp(Complex(0.0, -t.flux_offset));
    SparseMatrixXcd cosine = e * (0.5 * phase);
    SparseMatrixXcd adj = SparseMatrixXcd(cosine.adjoint());
    add_term(trips, cosine, -t.energy);
    add_term(trips, adj, -t.energy);
  }

  SparseMatrixXcd h(dim, dim);
  h.setFromTriplets(trips.begin(), trips.end());
  h.prune(1e-14, 1.0);
  sys.hamiltonian = h;
  return sys;
}

QuantizedSystem assemble_hamiltonian(const HamiltonianSpec& spec,
                                     const TruncationPolicy& truncation) {
  return assemble_hamiltonian(spec, choose_bases(spec, truncation),
                              truncation.dimension_cap);
}

QuantizedSystem assemble_chain_hamiltonian(const ChainCircuit& circuit,
                                           const TruncationPolicy& truncation) {
  check_component_values(circuit);
  const int nloops = static_cast<int>(circuit.loops.size());
  std::vector<QuantizedSystem> parts;
  std::vector<HamiltonianSpec> specs;
  int node_offset = 0;
  double total_log_dim = 0.0;
  for (int k = 0; k < nloops; ++k) {
    HamiltonianSpec spec = reduce_loop(circuit.loops[k]);
    auto bases = choose_bases(spec, truncation, node_offset);
    node_offset += spec.size();
    for (const auto& b : bases) total_log_dim += std::log2(double(b.dimension()));
    if (total_log_dim > std::log2(double(truncation.dimension_cap))) {
      throw DimensionOverflowError("chain tensor dimension exceeds the cap");
    }
    parts.push_back(assemble_hamiltonian(spec, bases, truncation.dimension_cap));
    specs.push_back(std::move(spec));
  }
  if (nloops == 1) return std::move(parts[0]);

  QuantizedSystem sys;
  std::vector<int> loop_dim(nloops);
  for (int k = 0; k < nloops; ++k) {
    loop_dim[k] = parts[k].dimension();
    sys.loop_first_node.push_back(
        parts[k].node_count() > 0 ? static_cast<int>(sys.node_ops.size()) : -1);
    for (int l = 0; l < parts[k].node_count(); ++l) {
      sys.node_ops.push_back(parts[k].node_ops[l]);
      sys.dims.push_back(parts[k].dims[l]);
      sys.addresses.push_back({k, parts[k].addresses[l].node_label});
    }
  }
  int dim = 1;
  for (int k = 0; k < nloops; ++k) dim *= loop_dim[k];

  auto lift_loop_matrix = [&](const SparseMatrixXcd& m, int at) {
    SparseMatrixXcd acc(1, 1);
    acc.insert(0, 0) = 1.0;
    for (int k = 0; k < nloops; ++k) {
      acc = sparse_kron(acc, k == at ? m : sparse_identity(loop_dim[k]));
    }
    return acc;
  };

  std::vector<Eigen::Triplet<Complex>> trips;
  for (int k = 0; k < nloops; ++k) {
    add_term(trips, lift_loop_matrix(parts[k].hamiltonian, k), 1.0);
  }
  // Capacitive coupling 4 E_Cc N_k N_{k+1}: rightmost active node of loop k
  // to leftmost active node of loop k+1.
  for (int k = 0; k + 1 < nloops; ++k) {
    if (parts[k].node_count() == 0 || parts[k + 1].node_count() == 0) continue;
    const double ecc =
        coupling_energy_unit() / circuit.coupling_capacitances[k];
    SparseMatrixXcd nk =
        lift_loop_matrix(parts[k].lifted_number_operator(parts[k].edge_node(false)), k);
    SparseMatrixXcd nk1 = lift_loop_matrix(
        parts[k + 1].lifted_number_operator(parts[k + 1].edge_node(true)), k + 1);
    add_term(trips, SparseMatrixXcd(nk * nk1), 4.0 * ecc);
  }

  SparseMatrixXcd h(dim, dim);
  h.setFromTriplets(trips.begin(), trips.end());
  h.prune(1e-14, 1.0);
  sys.hamiltonian = h;
  return sys;
}

ConvergenceReport convergence_study(const ChainCircuit& circuit, int m_min,
                                    int m_max, double tolerance) {
  ConvergenceReport report;
  report.tolerance = tolerance;
  std::vector<Eigen::VectorXd> levels;
  for (int m = m_min; m <= m_max + 1; ++m) {
    auto sys = assemble_chain_hamiltonian(circuit, TruncationPolicy::uniform(m));
    const int k = std::min(4, sys.dimension());
    levels.push_back(lowest_eigenvalues(sys.hamiltonian, k));
  }
  for (int i = 0; i + 1 < static_cast<int>(levels.size()); ++i) {
    std::array<double, 4> eps{};
    for (int nlev = 0; nlev < 4; ++nlev) {
      if (nlev < levels[i].size() && nlev < levels[i + 1].size()) {
        const double denom = std::abs(levels[i + 1](nlev));
        eps[nlev] = denom > 0.0
                        ? std::abs(levels[i](nlev) - levels[i + 1](nlev)) / denom
                        : std::abs(levels[i](nlev) - levels[i + 1](nlev));
      }
    }
    report.m_values.push_back(m_min + i);
    report.relative_errors.push_back(eps);
    const double worst = *std::max_element(eps.begin(), eps.end());
    if (!report.converged_m && worst < tolerance) {
      report.converged_m = m_min + i;
    }
  }
  return report;
}

TruncationPolicy converged_truncation(const ChainCircuit& circuit, int levels,
                                      double rel_tol, int m_start, int m_limit) {
  TruncationPolicy policy = TruncationPolicy::uniform(m_start);
  auto transitions = [&](const TruncationPolicy& p) {
    auto sys = assemble_chain_hamiltonian(circuit, p);
    const int k = std::min(levels + 1, sys.dimension());
    Eigen::VectorXd w = lowest_eigenvalues(sys.hamiltonian, k);
    Eigen::VectorXd t(k - 1);
    for (int i = 0; i + 1 < k; ++i) t(i) = w(i + 1) - w(0);
    return t;
  };
  Eigen::VectorXd prev = transitions(policy);
  for (int m = m_start * 3 / 2; m <= m_limit; m = m * 3 / 2) {
    TruncationPolicy next = TruncationPolicy::uniform(m);
    next.dimension_cap = policy.dimension_cap;
    Eigen::VectorXd cur = transitions(next);
    // compare against the spectral span so narrow gaps do not demand
    // disproportionate absolute accuracy
    const double scale = std::max(cur.cwiseAbs().maxCoeff(), 1e6);
    double worst = 0.0;
    for (int i = 0; i < prev.size() && i < cur.size(); ++i) {
      worst = std::max(worst, std::abs(cur(i) - prev(i)) / scale);
    }
    if (worst < rel_tol) return policy;
    policy = next;
    prev = cur;
  }
  return policy;
}

}  // namespace circuitforge
