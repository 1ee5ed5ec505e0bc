#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "circuitforge/constants.hpp"
#include "circuitforge/eigensolver.hpp"
#include "circuitforge/quantize.hpp"

using namespace circuitforge;

namespace {

LoopTopology lc_loop(double c, double l) {
  LoopTopology t;
  t.branches[0] = BranchSpec::capacitor(c);
  t.branches[1] = BranchSpec::inductor(l);
  return t;
}

LoopTopology split_transmon(double phase = 0.0) {
  LoopTopology t;
  t.branches[0] = BranchSpec::junction(1.92e-15, 1.0e9);
  t.branches[3] = BranchSpec::junction(54.2e-15, 9.127e9);
  t.external_phase = phase;
  return t;
}

LoopTopology fluxonium(double phase) {
  LoopTopology t;
  t.branches[0] = BranchSpec::inductor(150e-9);
  t.branches[3] = BranchSpec::junction(28e-15, 64.21e9);
  t.external_phase = phase;
  return t;
}

void randomize(LoopTopology& t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cap(0.15e-15, 800e-15);
  std::uniform_real_distribution<double> ind(238e-12, 15e-9);
  std::uniform_real_distribution<double> jcap(3e-15, 6e-12);
  std::uniform_real_distribution<double> jen(0.15e9, 200e9);
  for (auto& b : t.branches) {
    switch (b.kind) {
      case BranchKind::Capacitor: b.capacitance = cap(rng); break;
      case BranchKind::Inductor: b.inductance = ind(rng); break;
      case BranchKind::JosephsonJunction:
        b.junction_capacitance = jcap(rng);
        b.josephson_energy = jen(rng);
        break;
      case BranchKind::Absent: break;
    }
  }
}

}  // namespace

TEST_CASE("basis selection follows the quartic-derivative rules") {
  // LC only: no quartic term anywhere
  auto spec = reduce_loop(lc_loop(1e-13, 2e-9));
  REQUIRE(spec.size() == 1);
  CHECK(select_basis(spec, 0) == BasisChoice::Type::Fock);

  // two junctions, no inductor: charge
  auto spec2 = reduce_loop(split_transmon());
  REQUIRE(spec2.size() == 1);
  CHECK(select_basis(spec2, 0) == BasisChoice::Type::Charge);

  // junction + inductor: fluxonium-like, Fock
  auto spec3 = reduce_loop(fluxonium(0.0));
  REQUIRE(spec3.size() == 1);
  CHECK(select_basis(spec3, 0) == BasisChoice::Type::Fock);
}

TEST_CASE("LC loop quantizes to the analytic oscillator") {
  const double c = 83e-15, l = 4.7e-9;
  auto sys = assemble_chain_hamiltonian(ChainCircuit::single(lc_loop(c, l)),
                                        TruncationPolicy::uniform(14));
  auto w = lowest_eigenvalues(sys.hamiltonian, 5);
  const double f_lc = 1.0 / (2.0 * std::numbers::pi * std::sqrt(l * c));
  for (int i = 0; i + 1 < w.size(); ++i) {
    CHECK(std::abs(w(i + 1) - w(i) - f_lc) <= 1e-9 * f_lc);
  }
}

TEST_CASE("every valid topology quantizes to a Hermitian matrix") {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (const auto& base : enumerate_single_loop_topologies()) {
    LoopTopology t = base;
    randomize(t, rng);
    t.external_phase = 0.75;
    auto spec = reduce_loop(t);
    for (int l = 0; l < spec.size(); ++l) {
      auto b = select_basis(spec, l);
      CHECK((b == BasisChoice::Type::Charge || b == BasisChoice::Type::Fock));
    }
    auto sys = assemble_hamiltonian(spec, TruncationPolicy::uniform(4));
    Eigen::MatrixXcd h(sys.hamiltonian);
    const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    ++checked;
  }
  CHECK(checked == 225);
}

TEST_CASE("mixed-basis cosine equals the direct double-shift construction") {
  // Two-node charge system: cos(phi1 - phi0) assembled through the generic
  // path must match Eq.-style |N0+1,N1><N0,N1+1| + h.c. built by hand.
  HamiltonianSpec spec;
  spec.charge_energy = Eigen::Matrix2d::Zero();
  spec.charge_energy << 0.3e9, 0.05e9, 0.05e9, 0.4e9;
  spec.inductive_energy = Eigen::Matrix2d::Zero();
  spec.node_has_inductance = {false, false};
  spec.node_labels = {0, 1};
  JosephsonTerm t;
  t.energy = 2.5e9;
  t.phase_coefficients = Eigen::VectorXi(2);
  t.phase_coefficients << -1, 1;
  t.flux_offset = 0.0;
  spec.josephson_terms.push_back(t);

  const int nmax = 2, d = 2 * nmax + 1;
  std::vector<BasisChoice> bases(2, BasisChoice{BasisChoice::Type::Charge, nmax});
  auto sys = assemble_hamiltonian(spec, bases);

  Eigen::MatrixXcd n1 = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) n1(i, i) = i - nmax;
  for (int i = 0; i + 1 < d; ++i) shift(i + 1, i) = 1.0;
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  // |N0+1><N0| tensor |N1><N1+1| + h.c. = shift0 shift1^dag + h.c.
  Eigen::MatrixXcd hop = kron(shift.adjoint(), shift);
  Eigen::MatrixXcd expected = 4.0 * spec.charge_energy(0, 0) * kron(n1 * n1, id) +
                              4.0 * spec.charge_energy(1, 1) * kron(id, n1 * n1) +
                              8.0 * spec.charge_energy(0, 1) * kron(n1, n1) -
                              t.energy / 2.0 * (hop + hop.adjoint());
  CHECK((Eigen::MatrixXcd(sys.hamiltonian) - expected).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("decoupled chain spectrum is the sorted direct sum") {
  ChainCircuit chain;
  chain.loops = {lc_loop(2e-13, 3e-9), split_transmon()};
  chain.coupling_capacitances = {1.0};  // e^2/C_c is negligible
  auto sys = assemble_chain_hamiltonian(chain, TruncationPolicy::uniform(10));
  auto w = lowest_eigenvalues(sys.hamiltonian, 5);

  auto sys_a = assemble_chain_hamiltonian(ChainCircuit::single(chain.loops[0]),
                                          TruncationPolicy::uniform(10));
  auto sys_b = assemble_chain_hamiltonian(ChainCircuit::single(chain.loops[1]),
                                          TruncationPolicy::uniform(10));
  auto wa = lowest_eigenvalues(sys_a.hamiltonian, 5);
  auto wb = lowest_eigenvalues(sys_b.hamiltonian, 5);
  std::vector<double> sums;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) sums.push_back(wa(i) + wb(j));
  std::sort(sums.begin(), sums.end());
  const double scale = std::abs(w(0)) + std::abs(w(4) - w(0));
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(w(i) - sums[i]) <= 1e-8 * scale);
  }
}

TEST_CASE("weak chain coupling matches second-order perturbation theory") {
  ChainCircuit chain;
  chain.loops = {split_transmon(0.0), split_transmon(0.0)};
  const TruncationPolicy trunc = TruncationPolicy::uniform(8);

  auto loop_sys = assemble_chain_hamiltonian(ChainCircuit::single(chain.loops[0]), trunc);
  const int kl = 10;
  Eigensystem le = eigensystem(loop_sys.hamiltonian, kl);
  Eigen::MatrixXcd nloc =
      le.vectors.adjoint() *
      (loop_sys.lifted_number_operator(0) * le.vectors);

  auto shift_at = [&](double cc) {
    chain.coupling_capacitances = {cc};
    auto sys = assemble_chain_hamiltonian(chain, trunc);
    auto w = lowest_eigenvalues(sys.hamiltonian, 1);
    return w(0) - 2.0 * le.values(0);
  };

  // First order vanishes (<0|N|0> = 0), so the shift is second order:
  // sum over pairs |<0|N|a>|^2 |<0|N|b>|^2 / (E_00 - E_ab) * (4 E_cc)^2.
  const double cc = 2e-12;
  const double ecc = coupling_energy_unit() / cc;
  double second = 0.0;
  for (int a = 0; a < kl; ++a) {
    for (int b = 0; b < kl; ++b) {
      if (a == 0 && b == 0) continue;
      const double de = -(le.values(a) - le.values(0)) - (le.values(b) - le.values(0));
      if (de == 0.0) continue;
      const double me = std::norm(nloc(a, 0)) * std::norm(nloc(b, 0));
      second += 16.0 * ecc * ecc * me / de;
    }
  }
  const double shift = shift_at(cc);
  CHECK(shift == doctest::Approx(second).epsilon(0.05));

  // quadratic scaling in the coupling strength
  const double shift_half = shift_at(2.0 * cc);  // halves E_cc
  CHECK(shift / shift_half == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("spectra are 2 pi periodic in the external flux") {
  for (double base : {0.0, 1.3}) {
    LoopTopology a = fluxonium(base);
    LoopTopology b = fluxonium(base + 2.0 * std::numbers::pi);
    auto wa = lowest_eigenvalues(
        assemble_chain_hamiltonian(ChainCircuit::single(a),
                                   TruncationPolicy::uniform(25)).hamiltonian, 4);
    auto wb = lowest_eigenvalues(
        assemble_chain_hamiltonian(ChainCircuit::single(b),
                                   TruncationPolicy::uniform(25)).hamiltonian, 4);
    const double scale = std::max(wa.cwiseAbs().maxCoeff(), 1.0);
    CHECK((wa - wb).cwiseAbs().maxCoeff() <= 1e-9 * scale);
  }
}

TEST_CASE("dimension cap rejects oversized tensor spaces") {
  TruncationPolicy t = TruncationPolicy::uniform(30);
  t.dimension_cap = 100;
  LoopTopology all_jj;
  for (auto& b : all_jj.branches) b = BranchSpec::junction(1e-14, 5e9);
  CHECK_THROWS_AS(
      assemble_chain_hamiltonian(ChainCircuit::single(all_jj), t),
      DimensionOverflowError);
}

TEST_CASE("harmonic-only circuits truncate exactly") {
  auto circuit = ChainCircuit::single(lc_loop(1.2e-13, 2.2e-9));
  auto report = convergence_study(circuit, 4, 9);
  for (const auto& eps : report.relative_errors) {
    for (double e : eps) CHECK(e <= 1e-12);
  }
  CHECK(report.converged_m.value() == 4);
}

TEST_CASE("refinement is monotone up to the noise floor") {
  auto circuit = ChainCircuit::single(fluxonium(std::numbers::pi / 3));
  auto eps_at = [&](int m) {
    auto r = convergence_study(circuit, m, m);
    double worst = 0.0;
    for (double e : r.relative_errors[0]) worst = std::max(worst, e);
    return worst;
  };
  CHECK(eps_at(24) <= eps_at(12) + 1e-10);
}
