#include "circuitforge/network.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "circuitforge/constants.hpp"

namespace circuitforge {

namespace {

// Matrix rows below this magnitude count as structurally zero.  Component
// values are bounded well above it (smallest capacitor 0.15 fF = 1.5e-16 F).
constexpr double kZeroRowThreshold = 1e-18;

double branch_capacitance(const BranchSpec& b) {
  if (b.kind == BranchKind::Capacitor) return b.capacitance;
  if (b.kind == BranchKind::JosephsonJunction) return b.junction_capacitance;
  return 0.0;
}

Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& m, int p) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd out(n - 1, n - 1);
  for (int i = 0, ii = 0; i < n; ++i) {
    if (i == p) continue;
    for (int j = 0, jj = 0; j < n; ++j) {
      if (j == p) continue;
      out(ii, jj) = m(i, j);
      ++jj;
    }
    ++ii;
  }
  return out;
}

// Schur complement: eliminate coordinate p from the quadratic form M by
// stationarity, M' = M_kk - M_kp M_pp^-1 M_pk.  Also returns the
// substitution row x_p = coeffs . x_keep.
struct SchurResult {
  Eigen::MatrixXd reduced;
  Eigen::VectorXd substitution;
};

SchurResult schur_eliminate(const Eigen::MatrixXd& m, int p) {
  const int n = static_cast<int>(m.rows());
  if (!(std::abs(m(p, p)) > 0.0)) {
    throw DegenerateNetworkError("singular pivot while eliminating a passive node");
  }
  Eigen::VectorXd col(n - 1);
  for (int i = 0, ii = 0; i < n; ++i) {
    if (i == p) continue;
    col(ii++) = m(i, p);
  }
  SchurResult r;
  r.reduced = drop_row_col(m, p) - col * col.transpose() / m(p, p);
  r.substitution = -col / m(p, p);
  return r;
}

void drop_node_from_terms(std::vector<JosephsonTerm>& terms, int p) {
  for (auto& t : terms) {
    const int n = static_cast<int>(t.phase_coefficients.size());
    Eigen::VectorXi v(n - 1);
    for (int i = 0, ii = 0; i < n; ++i) {
      if (i == p) continue;
      v(ii++) = t.phase_coefficients(i);
    }
    t.phase_coefficients = v;
  }
}

bool junction_touches(const std::vector<JosephsonTerm>& terms, int p) {
  return std::any_of(terms.begin(), terms.end(), [p](const JosephsonTerm& t) {
    return t.phase_coefficients(p) != 0;
  });
}

}  // namespace

std::pair<Eigen::Matrix3d, Eigen::Matrix3d> build_matrices(
    const LoopTopology& topology) {
  std::array<double, 4> csum{}, linvsum{};
  for (int l = 0; l < 4; ++l) {
    const auto& b = topology.branches[l];
    csum[l] = branch_capacitance(b);
    linvsum[l] = b.kind == BranchKind::Inductor ? 1.0 / b.inductance : 0.0;
  }
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d linv = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    c(i, i) = csum[i] + csum[i + 1];
    linv(i, i) = linvsum[i] + linvsum[i + 1];
    if (i < 2) {
      c(i, i + 1) = c(i + 1, i) = -csum[i + 1];
      linv(i, i + 1) = linv(i + 1, i) = -linvsum[i + 1];
    }
  }
  return {c, linv};
}

std::optional<int> apply_fluxoid_rule(const LoopTopology& topology) {
  for (int l = 0; l < 4; ++l) {
    if (topology.branches[l].kind == BranchKind::JosephsonJunction) return l;
  }
  return std::nullopt;
}

ReducedNetwork build_network(const LoopTopology& topology) {
  // Node indices: 0 = ground, 1..3 = node0..node2.  Wires merge endpoints.
  std::array<int, 4> parent = {0, 1, 2, 3};
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  // Branch endpoints ordered so the phase argument is phi[to] - phi[from],
  // matching the loop Lagrangian: phi0, phi1-phi0, phi2-phi1, phi2.
  constexpr int kFrom[4] = {0, 1, 2, 0};
  constexpr int kTo[4] = {1, 2, 3, 3};
  for (int l = 0; l < 4; ++l) {
    if (topology.branches[l].kind == BranchKind::Absent) unite(kFrom[l], kTo[l]);
  }
  const int ground = find(0);
  std::vector<int> actives;
  std::array<int, 4> index{};
  index.fill(-1);
  for (int v = 0; v < 4; ++v) {
    if (find(v) == v && v != ground) {
      index[v] = static_cast<int>(actives.size());
      actives.push_back(v);
    }
  }
  const int n = static_cast<int>(actives.size());

  ReducedNetwork net;
  // Active node labels in 0..2 space (original node0..node2).
  for (int v : actives) net.active_nodes.push_back(v - 1);
  net.c_matrix = Eigen::MatrixXd::Zero(n, n);
  net.linv_matrix = Eigen::MatrixXd::Zero(n, n);

  const auto closure = apply_fluxoid_rule(topology);
  for (int l = 0; l < 4; ++l) {
    const auto& b = topology.branches[l];
    if (b.kind == BranchKind::Absent) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    const int cf = find(kFrom[l]);
    const int ct = find(kTo[l]);
    if (cf != ground) v(index[cf]) -= 1.0;
    if (ct != ground) v(index[ct]) += 1.0;
    switch (b.kind) {
      case BranchKind::Capacitor:
        net.c_matrix += b.capacitance * v * v.transpose();
        break;
      case BranchKind::Inductor:
        net.linv_matrix += (1.0 / b.inductance) * v * v.transpose();
        break;
      case BranchKind::JosephsonJunction: {
        net.c_matrix += b.junction_capacitance * v * v.transpose();
        JosephsonTerm term;
        term.energy = b.josephson_energy;
        term.phase_coefficients = v.cast<int>();
        term.flux_offset =
            (closure && *closure == l) ? topology.external_phase : 0.0;
        net.josephson_terms.push_back(term);
        break;
      }
      case BranchKind::Absent:
        break;
    }
  }
  return net;
}

ReducedNetwork eliminate_passive_nodes(const ReducedNetwork& network) {
  ReducedNetwork net = network;
  bool changed = true;
  while (changed) {
    changed = false;
    const int n = static_cast<int>(net.c_matrix.rows());
    for (int p = 0; p < n && !changed; ++p) {
      const bool c_zero =
          net.c_matrix.row(p).cwiseAbs().maxCoeff() < kZeroRowThreshold;
      const bool l_zero = net.linv_matrix.rows() == 0 ||
          net.linv_matrix.row(p).cwiseAbs().maxCoeff() < kZeroRowThreshold;
      const bool has_junction = junction_touches(net.josephson_terms, p);
      EliminationRecord rec;
      rec.node = net.active_nodes[p];
      if (c_zero && l_zero && !has_junction) {
        // Fully decoupled variable: drop it outright.
        rec.kind = EliminationRecord::Kind::Spectator;
        net.c_matrix = drop_row_col(net.c_matrix, p);
        net.linv_matrix = drop_row_col(net.linv_matrix, p);
        drop_node_from_terms(net.josephson_terms, p);
        net.active_nodes.erase(net.active_nodes.begin() + p);
        net.elimination_maps.push_back(std::move(rec));
        changed = true;
      } else if (c_zero && !has_junction) {
        // Coordinate-only node: dL/dphi_p = 0 fixes phi_p linearly.
        auto r = schur_eliminate(net.linv_matrix, p);
        rec.kind = EliminationRecord::Kind::Coordinate;
        rec.coefficients = r.substitution;
        net.linv_matrix = r.reduced;
        net.c_matrix = drop_row_col(net.c_matrix, p);
        drop_node_from_terms(net.josephson_terms, p);
        net.active_nodes.erase(net.active_nodes.begin() + p);
        rec.basis = net.active_nodes;
        net.elimination_maps.push_back(std::move(rec));
        changed = true;
      } else if (l_zero && !has_junction && !c_zero) {
        // Velocity-only node: dL/dphidot_p = 0 fixes phidot_p linearly.
        auto r = schur_eliminate(net.c_matrix, p);
        rec.kind = EliminationRecord::Kind::Velocity;
        rec.coefficients = r.substitution;
        net.c_matrix = r.reduced;
        net.linv_matrix = drop_row_col(net.linv_matrix, p);
        drop_node_from_terms(net.josephson_terms, p);
        net.active_nodes.erase(net.active_nodes.begin() + p);
        rec.basis = net.active_nodes;
        net.elimination_maps.push_back(std::move(rec));
        changed = true;
      }
    }
    if (changed) continue;

    // Null directions of C are coordinate-only: junctions cannot see them
    // (their C_J puts mass along every phase difference they couple), so
    // dL/dphi = 0 along the direction is linear.  A direction with
    // inductive energy is eliminated by a basis change that makes it a
    // coordinate followed by the usual Schur step; a direction the
    // potential ignores entirely is cyclic and gets pinned.
    const int m = static_cast<int>(net.c_matrix.rows());
    if (m == 0) break;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(net.c_matrix);
    const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(),
                                  kZeroRowThreshold);
    for (int i = 0; i < m && !changed; ++i) {
      if (es.eigenvalues()(i) > 1e-12 * scale) continue;
      Eigen::VectorXd v = es.eigenvectors().col(i);
      const double pot = v.dot(net.linv_matrix * v);
      const double lscale =
          std::max(net.linv_matrix.cwiseAbs().maxCoeff(), 1.0);
      int p = 0;
      v.cwiseAbs().maxCoeff(&p);
      EliminationRecord rec;
      rec.node = net.active_nodes[p];
      if (pot > 1e-12 * lscale) {
        // basis where column p becomes v: C row p vanishes, Linv row p
        // becomes v^T Linv, all other entries keep their node meaning
        Eigen::MatrixXd lp = net.linv_matrix;
        Eigen::VectorXd lv = net.linv_matrix * v;
        lp.row(p) = lv.transpose();
        lp.col(p) = lv;
        lp(p, p) = pot;
        auto r = schur_eliminate(lp, p);
        rec.kind = EliminationRecord::Kind::Coordinate;
        rec.coefficients = r.substitution;
        net.linv_matrix = r.reduced;
      } else {
        rec.kind = EliminationRecord::Kind::Gauge;
        net.linv_matrix = drop_row_col(net.linv_matrix, p);
      }
      net.c_matrix = drop_row_col(net.c_matrix, p);
      drop_node_from_terms(net.josephson_terms, p);
      net.active_nodes.erase(net.active_nodes.begin() + p);
      rec.basis = net.active_nodes;
      net.elimination_maps.push_back(std::move(rec));
      changed = true;
    }
  }
  return net;
}

HamiltonianSpec legendre_transform(const ReducedNetwork& network) {
  const int n = static_cast<int>(network.c_matrix.rows());
  HamiltonianSpec spec;
  spec.node_labels = network.active_nodes;
  spec.josephson_terms = network.josephson_terms;
  if (n == 0) {
    spec.charge_energy.resize(0, 0);
    spec.inductive_energy.resize(0, 0);
    return spec;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(network.c_matrix);
  if (llt.info() != Eigen::Success) {
    throw DegenerateNetworkError(
        "capacitance matrix is not positive definite; passive-node "
        "elimination was skipped or incomplete");
  }
  spec.charge_energy = charge_energy_unit() *
      llt.solve(Eigen::MatrixXd::Identity(n, n));
  // Symmetrize away the solve's rounding noise.
  spec.charge_energy =
      0.5 * (spec.charge_energy + spec.charge_energy.transpose()).eval();
  spec.inductive_energy = inductive_energy_unit() * network.linv_matrix;
  spec.node_has_inductance.resize(n);
  for (int i = 0; i < n; ++i) {
    spec.node_has_inductance[i] =
        network.linv_matrix.row(i).cwiseAbs().maxCoeff() >= kZeroRowThreshold;
  }
  return spec;
}

HamiltonianSpec reduce_loop(const LoopTopology& topology) {
  return legendre_transform(eliminate_passive_nodes(build_network(topology)));
}

}  // namespace circuitforge
