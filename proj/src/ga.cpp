#include "circuitforge/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "circuitforge/threads.hpp"

namespace circuitforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

BranchSpec random_branch(BranchKind kind, const FixedParameters& p) {
  switch (kind) {
    case BranchKind::Capacitor: return BranchSpec::capacitor(p.capacitance);
    case BranchKind::Inductor: return BranchSpec::inductor(p.inductance);
    case BranchKind::JosephsonJunction:
      return BranchSpec::junction(p.junction_capacitance, p.josephson_energy);
    case BranchKind::Absent: return BranchSpec::absent();
  }
  return BranchSpec::absent();
}

LoopTopology random_topology(std::mt19937_64& rng, const FixedParameters& p,
                             double phase) {
  std::uniform_int_distribution<int> kind(0, 3);
  LoopTopology t;
  t.external_phase = phase;
  do {
    for (int l = 0; l < 4; ++l) {
      t.branches[l] = random_branch(static_cast<BranchKind>(kind(rng)), p);
    }
  } while (!validate_topology(t).valid);
  return t;
}

struct Ranked {
  double cost;
  int index;
};

std::vector<Ranked> ranked(const std::vector<double>& costs) {
  std::vector<Ranked> r(costs.size());
  for (std::size_t i = 0; i < costs.size(); ++i) r[i] = {costs[i], int(i)};
  std::stable_sort(r.begin(), r.end(), [](const Ranked& a, const Ranked& b) {
    return a.cost < b.cost;
  });
  return r;
}

}  // namespace

std::mt19937_64 evolution_stream(std::uint64_t root_seed) {
  std::uint64_t s = root_seed;
  splitmix64(s);
  return std::mt19937_64(splitmix64(s));
}

std::mt19937_64 individual_stream(std::uint64_t root_seed, int epoch, int slot) {
  std::uint64_t s = root_seed ^ (0xa5a5a5a5ULL + std::uint64_t(epoch) * 0x10001ULL +
                                 std::uint64_t(slot) * 0x9e37ULL);
  splitmix64(s);
  return std::mt19937_64(splitmix64(s));
}

LoopTopology apply_fixed_parameters(const LoopTopology& topology,
                                    const FixedParameters& params) {
  LoopTopology t = topology;
  for (auto& b : t.branches) b = random_branch(b.kind, params);
  return t;
}

LoopTopology crossover_topology(const LoopTopology& a, const LoopTopology& b,
                                std::mt19937_64& rng, int retry_budget) {
  std::uniform_int_distribution<int> coin(0, 1);
  for (int attempt = 0; attempt < retry_budget; ++attempt) {
    const bool a_left = coin(rng) == 0;
    const LoopTopology& left = a_left ? a : b;
    const LoopTopology& right = a_left ? b : a;
    LoopTopology child;
    child.external_phase = a.external_phase;
    child.branches[0] = left.branches[0];
    child.branches[1] = left.branches[1];
    child.branches[2] = right.branches[2];
    child.branches[3] = right.branches[3];
    if (validate_topology(child).valid) return child;
  }
  return a;  // caller passes the fitter parent first
}

LoopTopology mutate_topology(const LoopTopology& genome, std::mt19937_64& rng,
                             double rate, const FixedParameters& params) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) >= rate) return genome;
  std::uniform_int_distribution<int> locus_dist(0, 3);
  std::uniform_int_distribution<int> kind_dist(0, 3);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    LoopTopology t = genome;
    const int locus = locus_dist(rng);
    const auto kind = static_cast<BranchKind>(kind_dist(rng));
    if (kind == genome.branches[locus].kind) continue;
    t.branches[locus] = random_branch(kind, params);
    if (validate_topology(t).valid) return t;
  }
  return genome;
}

std::vector<double> pack_parameters(const ChainCircuit& circuit) {
  std::vector<double> genome;
  for (const auto& loop : circuit.loops) {
    for (const auto& b : loop.branches) {
      switch (b.kind) {
        case BranchKind::Capacitor: genome.push_back(b.capacitance); break;
        case BranchKind::Inductor: genome.push_back(b.inductance); break;
        case BranchKind::JosephsonJunction:
          genome.push_back(b.junction_capacitance);
          genome.push_back(b.josephson_energy);
          break;
        case BranchKind::Absent: break;
      }
    }
  }
  for (double c : circuit.coupling_capacitances) genome.push_back(c);
  return genome;
}

ChainCircuit unpack_parameters(const ChainCircuit& shape,
                               const std::vector<double>& genome) {
  ChainCircuit out = shape;
  std::size_t i = 0;
  for (auto& loop : out.loops) {
    for (auto& b : loop.branches) {
      switch (b.kind) {
        case BranchKind::Capacitor: b.capacitance = genome.at(i++); break;
        case BranchKind::Inductor: b.inductance = genome.at(i++); break;
        case BranchKind::JosephsonJunction:
          b.junction_capacitance = genome.at(i++);
          b.josephson_energy = genome.at(i++);
          break;
        case BranchKind::Absent: break;
      }
    }
  }
  for (auto& c : out.coupling_capacitances) c = genome.at(i++);
  if (i != genome.size()) {
    throw std::invalid_argument("genome length does not match topology");
  }
  return out;
}

std::vector<std::pair<double, double>> genome_bounds(
    const ChainCircuit& shape, const ParameterBounds& bounds) {
  std::vector<std::pair<double, double>> out;
  for (const auto& loop : shape.loops) {
    for (const auto& b : loop.branches) {
      switch (b.kind) {
        case BranchKind::Capacitor: out.push_back(bounds.capacitance); break;
        case BranchKind::Inductor: out.push_back(bounds.inductance); break;
        case BranchKind::JosephsonJunction:
          out.push_back(bounds.junction_capacitance);
          out.push_back(bounds.josephson_energy);
          break;
        case BranchKind::Absent: break;
      }
    }
  }
  for (std::size_t k = 0; k < shape.coupling_capacitances.size(); ++k) {
    out.push_back(bounds.coupling_capacitance);
  }
  return out;
}

std::vector<double> crossover_parameters(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         std::mt19937_64& rng) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("parameter genomes differ in length");
  }
  if (a.empty()) return a;
  std::uniform_int_distribution<int> cut_dist(0, int(a.size()));
  std::uniform_int_distribution<int> coin(0, 1);
  const int cut = cut_dist(rng);
  const bool a_first = coin(rng) == 0;
  std::vector<double> child(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool from_first = int(i) < cut;
    child[i] = (from_first == a_first) ? a[i] : b[i];
  }
  return child;
}

std::vector<double> mutate_parameters(
    const std::vector<double>& genome,
    const std::vector<std::pair<double, double>>& bounds, std::mt19937_64& rng,
    double rate) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (genome.empty() || u(rng) >= rate) return genome;
  std::uniform_int_distribution<int> locus_dist(0, int(genome.size()) - 1);
  const int locus = locus_dist(rng);
  std::vector<double> out = genome;
  std::uniform_real_distribution<double> draw(bounds[locus].first,
                                              bounds[locus].second);
  out[locus] = draw(rng);
  return out;
}

namespace {

// Shared evolution loop over an abstract genome type.
template <typename Genome>
GAResult evolve(std::vector<Genome> population, const GAConfig& config,
                const std::function<double(const Genome&, int, int)>& evaluate,
                const std::function<Genome(const Genome&, const Genome&,
                                           std::mt19937_64&)>& crossover,
                const std::function<Genome(const Genome&, std::mt19937_64&)>& mutate,
                const std::function<ChainCircuit(const Genome&)>& to_circuit) {
  const int m = config.population;
  if (config.survivors < 1 || config.survivors >= m) {
    throw std::invalid_argument("survivors must satisfy 1 <= M-p < M");
  }
  auto evo = evolution_stream(config.seed);
  GAResult result;
  result.best_cost = kInf;

  std::vector<double> costs(m);
  auto evaluate_all = [&](int epoch) {
    parallel_for(0, m, [&](int i) { costs[i] = evaluate(population[i], epoch, i); });
    result.evaluations += m;
    for (int i = 0; i < m; ++i) {
      if (costs[i] < result.best_cost) {
        result.best_cost = costs[i];
        result.best = to_circuit(population[i]);
      }
    }
  };

  evaluate_all(0);
  result.history.push_back(result.best_cost);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    auto order = ranked(costs);
    std::vector<Genome> next;
    next.reserve(m);
    for (int i = 0; i < config.survivors; ++i) {
      next.push_back(population[order[i].index]);
    }
    std::uniform_int_distribution<int> pick(0, config.survivors - 1);
    while (static_cast<int>(next.size()) < m) {
      int ia = pick(evo);
      int ib = pick(evo);
      const Genome& ga = population[order[ia].index];
      const Genome& gb = population[order[ib].index];
      // fitter parent first; crossover falls back to it on retry exhaustion
      if (order[ia].cost <= order[ib].cost) {
        next.push_back(crossover(ga, gb, evo));
      } else {
        next.push_back(crossover(gb, ga, evo));
      }
    }
    if (config.mutate_single_individual) {
      std::uniform_int_distribution<int> pick_all(0, m - 1);
      const int who = pick_all(evo);
      next[who] = mutate(next[who], evo);
    } else {
      for (auto& g : next) g = mutate(g, evo);
    }
    population = std::move(next);
    evaluate_all(epoch + 1);
    result.history.push_back(result.best_cost);
  }
  return result;
}

}  // namespace

GAResult optimize_topology(const FitnessFunction& fitness,
                           const FixedParameters& params, const GAConfig& config,
                           double external_phase) {
  auto evo = evolution_stream(config.seed ^ 0x7069ULL);
  std::vector<LoopTopology> initial;
  for (int i = 0; i < config.population; ++i) {
    initial.push_back(random_topology(evo, params, external_phase));
  }
  auto to_circuit = [](const LoopTopology& t) { return ChainCircuit::single(t); };
  return evolve<LoopTopology>(
      std::move(initial), config,
      [&](const LoopTopology& t, int, int) {
        try {
          return fitness(ChainCircuit::single(t));
        } catch (const std::exception&) {
          return kInf;
        }
      },
      [&](const LoopTopology& a, const LoopTopology& b, std::mt19937_64& rng) {
        return crossover_topology(a, b, rng);
      },
      [&](const LoopTopology& g, std::mt19937_64& rng) {
        return mutate_topology(g, rng, config.mutation_rate, params);
      },
      to_circuit);
}

GAResult optimize_parameters(const ChainCircuit& topology_fixed,
                             const FitnessFunction& fitness,
                             const GAConfig& config) {
  const auto bounds = genome_bounds(topology_fixed, config.bounds);
  auto evo = evolution_stream(config.seed ^ 0x7061ULL);
  std::vector<std::vector<double>> initial;
  for (int i = 0; i < config.population; ++i) {
    std::vector<double> g(bounds.size());
    for (std::size_t j = 0; j < bounds.size(); ++j) {
      std::uniform_real_distribution<double> draw(bounds[j].first,
                                                  bounds[j].second);
      g[j] = draw(evo);
    }
    initial.push_back(std::move(g));
  }
  auto to_circuit = [&](const std::vector<double>& g) {
    return unpack_parameters(topology_fixed, g);
  };
  return evolve<std::vector<double>>(
      std::move(initial), config,
      [&](const std::vector<double>& g, int, int) {
        try {
          return fitness(unpack_parameters(topology_fixed, g));
        } catch (const std::exception&) {
          return kInf;
        }
      },
      [&](const std::vector<double>& a, const std::vector<double>& b,
          std::mt19937_64& rng) { return crossover_parameters(a, b, rng); },
      [&](const std::vector<double>& g, std::mt19937_64& rng) {
        return mutate_parameters(g, bounds, rng, config.mutation_rate);
      },
      to_circuit);
}

FitnessFunction make_cost_fitness(const CostSpec& cost_spec,
                                  const TruncationPolicy& truncation,
                                  int levels) {
  return [cost_spec, truncation, levels](const ChainCircuit& circuit) {
    auto sys = assemble_chain_hamiltonian(circuit, truncation);
    if (sys.dimension() < levels) {
      throw InsufficientLevelsError("spectrum too small for the cost");
    }
    auto report =
        spectrum_report(sys, levels, {cost_spec.operator_label});
    return evaluate_cost(report, cost_spec).total;
  };
}

}  // namespace circuitforge
