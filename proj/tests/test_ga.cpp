#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <mutex>
#include <set>

#include "circuitforge/eigensolver.hpp"
#include "circuitforge/ga.hpp"

using namespace circuitforge;

namespace {

// Cheap deterministic stand-in cost keyed on the topology code.
double toy_cost(const ChainCircuit& c) {
  const int code = topology_code(c.loops[0]);
  return std::abs(std::sin(code * 0.37) * 10.0 + code % 7);
}

GAConfig quick_config(std::uint64_t seed, int epochs = 10) {
  GAConfig cfg;
  cfg.epochs = epochs;
  cfg.seed = seed;
  cfg.mutation_rate = 0.2;
  return cfg;
}

}  // namespace

TEST_CASE("identical seeds give identical runs") {
  auto run = [&] {
    return optimize_topology(toy_cost, FixedParameters{}, quick_config(42));
  };
  auto a = run();
  auto b = run();
  CHECK(a.best_cost == b.best_cost);
  CHECK(a.best == b.best);
  CHECK(a.history == b.history);
}

TEST_CASE("best-so-far cost never increases") {
  auto r = optimize_topology(toy_cost, FixedParameters{}, quick_config(3, 25));
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    CHECK(r.history[i] <= r.history[i - 1]);
  }
  CHECK(r.history.size() == 26);
}

TEST_CASE("zero epochs returns the best of the initial population") {
  auto r = optimize_topology(toy_cost, FixedParameters{}, quick_config(5, 0));
  CHECK(r.history.size() == 1);
  CHECK(r.evaluations == 16);
}

TEST_CASE("survivors outrank every discarded individual") {
  // Observe per-epoch evaluations through the fitness hook: the best
  // `survivors` costs of epoch e must all reappear at epoch e+1 (mutation
  // disabled so elites pass through verbatim).
  std::mutex mu;
  std::vector<std::vector<double>> per_epoch(1);
  int count = 0;
  GAConfig cfg = quick_config(9, 6);
  cfg.mutation_rate = 0.0;
  auto spy = [&](const ChainCircuit& c) {
    const double v = toy_cost(c);
    std::lock_guard<std::mutex> lock(mu);
    if (static_cast<int>(per_epoch.back().size()) == cfg.population) {
      per_epoch.emplace_back();
    }
    per_epoch.back().push_back(v);
    ++count;
    return v;
  };
  optimize_topology(spy, FixedParameters{}, cfg);
  REQUIRE(per_epoch.size() == std::size_t(cfg.epochs + 1));
  for (std::size_t e = 0; e + 1 < per_epoch.size(); ++e) {
    auto sorted = per_epoch[e];
    std::sort(sorted.begin(), sorted.end());
    std::multiset<double> next(per_epoch[e + 1].begin(), per_epoch[e + 1].end());
    for (int i = 0; i < cfg.survivors; ++i) {
      auto it = next.find(sorted[i]);
      REQUIRE(it != next.end());
      next.erase(it);
    }
  }
}

TEST_CASE("population size is constant") {
  int count = 0;
  std::mutex mu;
  auto counting = [&](const ChainCircuit& c) {
    std::lock_guard<std::mutex> lock(mu);
    ++count;
    return toy_cost(c);
  };
  GAConfig cfg = quick_config(11, 7);
  optimize_topology(counting, FixedParameters{}, cfg);
  CHECK(count == cfg.population * (cfg.epochs + 1));
}

TEST_CASE("crossover closure and validity fallback") {
  std::mt19937_64 rng(1);
  FixedParameters p;
  LoopTopology all_jj, all_c;
  for (auto& b : all_jj.branches) b = BranchSpec::junction(p.junction_capacitance, p.josephson_energy);
  for (auto& b : all_c.branches) b = BranchSpec::capacitor(p.capacitance);

  auto same = crossover_topology(all_jj, all_jj, rng);
  CHECK(same == all_jj);

  // JJ-half plus C-half is a valid mix
  bool found_mix = false;
  for (int i = 0; i < 50; ++i) {
    auto child = crossover_topology(all_jj, all_c, rng);
    CHECK(validate_topology(child).valid);
    if (child.branches[0].kind == BranchKind::JosephsonJunction &&
        child.branches[2].kind == BranchKind::Capacitor) {
      found_mix = true;
    }
  }
  CHECK(found_mix);
}

TEST_CASE("mutation respects rate and validity") {
  FixedParameters p;
  LoopTopology base;
  base.branches[0] = BranchSpec::junction(p.junction_capacitance, p.josephson_energy);
  base.branches[2] = BranchSpec::inductor(p.inductance);

  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    CHECK(mutate_topology(base, rng, 0.0, p) == base);
  }
  for (int i = 0; i < 200; ++i) {
    auto m = mutate_topology(base, rng, 1.0, p);
    CHECK(validate_topology(m).valid);
    int diffs = 0;
    for (int l = 0; l < 4; ++l) {
      if (m.branches[l].kind != base.branches[l].kind) ++diffs;
    }
    CHECK(diffs == 1);
  }
}

TEST_CASE("parameter genomes stay within bounds") {
  LoopTopology t;
  t.branches[0] = BranchSpec::junction(1e-14, 5e9);
  t.branches[1] = BranchSpec::capacitor(1e-13);
  t.branches[2] = BranchSpec::inductor(1e-9);
  ChainCircuit shape = ChainCircuit::single(t);

  GAConfig cfg = quick_config(17, 12);
  auto bounds = genome_bounds(shape, cfg.bounds);
  REQUIRE(bounds.size() == 4);

  std::mutex mu;
  bool all_in = true;
  auto checking = [&](const ChainCircuit& c) {
    auto g = pack_parameters(c);
    std::lock_guard<std::mutex> lock(mu);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] < bounds[i].first || g[i] > bounds[i].second) all_in = false;
    }
    return std::abs(g[0] * 1e15 - 3.0);
  };
  optimize_parameters(shape, checking, cfg);
  CHECK(all_in);
}

TEST_CASE("parameter pack/unpack round trip") {
  LoopTopology t;
  t.branches[0] = BranchSpec::junction(1e-14, 5e9);
  t.branches[3] = BranchSpec::capacitor(2e-13);
  ChainCircuit chain;
  chain.loops = {t, t};
  chain.coupling_capacitances = {3e-13};
  auto genome = pack_parameters(chain);
  REQUIRE(genome.size() == 7);
  CHECK(unpack_parameters(chain, genome) == chain);

  std::vector<double> other = genome;
  other[6] = 5e-13;
  auto rebuilt = unpack_parameters(chain, other);
  CHECK(rebuilt.coupling_capacitances[0] == 5e-13);
}

TEST_CASE("zero mutation keeps an identical population invariant") {
  // Point bounds collapse every random initial genome to the same vector;
  // without mutation the population can never change.
  LoopTopology t;
  t.branches[0] = BranchSpec::junction(1e-14, 5e9);
  t.branches[2] = BranchSpec::capacitor(1e-13);
  ChainCircuit shape = ChainCircuit::single(t);

  GAConfig cfg = quick_config(23, 5);
  cfg.mutation_rate = 0.0;
  cfg.bounds.junction_capacitance = {1e-14, 1e-14};
  cfg.bounds.josephson_energy = {5e9, 5e9};
  cfg.bounds.capacitance = {1e-13, 1e-13};

  std::mutex mu;
  std::vector<std::vector<double>> genomes;
  auto spy = [&](const ChainCircuit& c) {
    auto g = pack_parameters(c);
    std::lock_guard<std::mutex> lock(mu);
    genomes.push_back(g);
    return 1.0;
  };
  optimize_parameters(shape, spy, cfg);
  REQUIRE(genomes.size() == std::size_t(cfg.population * (cfg.epochs + 1)));
  for (const auto& g : genomes) {
    CHECK(g == genomes.front());
  }
}

TEST_CASE("one-parameter search matches a grid oracle") {
  // Junction plus fixed shunt; cost is |w10 - 5 GHz| as a function of E_J.
  LoopTopology t;
  t.branches[0] = BranchSpec::junction(54.2e-15, 9e9);
  t.branches[2] = BranchSpec::capacitor(1e-13);
  ChainCircuit shape = ChainCircuit::single(t);

  auto w10_of = [&](double ej) {
    ChainCircuit c = shape;
    c.loops[0].branches[0].josephson_energy = ej;
    auto sys = assemble_chain_hamiltonian(c, TruncationPolicy::uniform(8));
    auto w = lowest_eigenvalues(sys.hamiltonian, 2);
    return w(1) - w(0);
  };
  auto cost = [&](const ChainCircuit& c) {
    return std::abs(w10_of(c.loops[0].branches[0].josephson_energy) - 5e9);
  };

  GAConfig cfg;
  cfg.seed = 31;
  cfg.epochs = 50;
  cfg.mutation_rate = 0.3;
  // genome: (C_J, E_J, C); pin everything but E_J via point bounds
  cfg.bounds.junction_capacitance = {54.2e-15, 54.2e-15};
  cfg.bounds.capacitance = {1e-13, 1e-13};
  cfg.bounds.josephson_energy = {5e9, 20e9};
  auto result = optimize_parameters(shape, cost, cfg);

  double best_grid = 1e300, best_ej = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double ej = 5e9 + (20e9 - 5e9) * i / 2000.0;
    const double c = std::abs(w10_of(ej) - 5e9);
    if (c < best_grid) {
      best_grid = c;
      best_ej = ej;
    }
  }
  const double got = result.best.loops[0].branches[0].josephson_energy;
  CHECK(std::abs(got - best_ej) <= 0.01 * best_ej);
}
