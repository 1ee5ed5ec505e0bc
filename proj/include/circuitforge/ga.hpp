#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "circuitforge/circuit.hpp"
#include "circuitforge/objectives.hpp"

namespace circuitforge {

struct ParameterBounds {
  std::pair<double, double> capacitance = {0.15e-15, 800e-15};      // F
  std::pair<double, double> inductance = {238e-12, 15000e-12};      // H
  std::pair<double, double> junction_capacitance = {3e-15, 6000e-15};
  std::pair<double, double> josephson_energy = {0.15e9, 200e9};     // Hz
  std::pair<double, double> coupling_capacitance = {0.15e-15, 800e-15};
};

struct GAConfig {
  int population = 16;
  int survivors = 8;  // M - p fittest kept each epoch
  double mutation_rate = 0.01;
  int epochs = 50;
  std::uint64_t seed = 1;
  ParameterBounds bounds;
  // Paper-style mode: one random individual is tested per epoch instead of
  // every individual independently.
  bool mutate_single_individual = false;
};

// Component values applied to every branch during topology search.
struct FixedParameters {
  double capacitance = 65e-15;
  double inductance = 1.25e-9;
  double junction_capacitance = 30e-15;
  double josephson_energy = 12e9;
};

using FitnessFunction = std::function<double(const ChainCircuit&)>;

struct GAResult {
  ChainCircuit best;
  double best_cost = 0.0;
  std::vector<double> history;  // best-so-far cost per epoch
  int evaluations = 0;
};

// Derived RNG streams: one for evolution decisions, independent ones per
// individual evaluation slot, so parallel evaluation cannot change the
// sequence of evolutionary draws.
std::mt19937_64 evolution_stream(std::uint64_t root_seed);
std::mt19937_64 individual_stream(std::uint64_t root_seed, int epoch, int slot);

// Fill every present component of the topology with the fixed values.
LoopTopology apply_fixed_parameters(const LoopTopology& topology,
                                    const FixedParameters& params);

// Offspring takes B0,B1 from one parent and B2,B3 from the other (the cut
// sits at the loop's active-node boundary); invalid offspring trigger
// regeneration, and an exhausted retry budget clones the fitter parent.
LoopTopology crossover_topology(const LoopTopology& a, const LoopTopology& b,
                                std::mt19937_64& rng, int retry_budget = 1000);

// With probability rate, re-draw one branch kind (validity preserved).
LoopTopology mutate_topology(const LoopTopology& genome, std::mt19937_64& rng,
                             double rate, const FixedParameters& params);

// Packed parameter genome of a chain: present components in branch order per
// loop, then the coupling capacitors.
std::vector<double> pack_parameters(const ChainCircuit& circuit);
ChainCircuit unpack_parameters(const ChainCircuit& shape,
                               const std::vector<double>& genome);
std::vector<std::pair<double, double>> genome_bounds(const ChainCircuit& shape,
                                                     const ParameterBounds& bounds);

std::vector<double> crossover_parameters(const std::vector<double>& a,
                                         const std::vector<double>& b,
                                         std::mt19937_64& rng);

std::vector<double> mutate_parameters(
    const std::vector<double>& genome,
    const std::vector<std::pair<double, double>>& bounds, std::mt19937_64& rng,
    double rate);

// Algorithm stage 1: fixed parameters, evolve single-loop topology.
GAResult optimize_topology(const FitnessFunction& fitness,
                           const FixedParameters& params, const GAConfig& config,
                           double external_phase = 0.0);

// Algorithm stage 2: fixed topology, evolve the packed parameter vector.
GAResult optimize_parameters(const ChainCircuit& topology_fixed,
                             const FitnessFunction& fitness,
                             const GAConfig& config);

// Cost pipeline used by both stages: quantize, diagonalize, evaluate the
// target cost; any failure maps to +infinity.
FitnessFunction make_cost_fitness(const CostSpec& cost_spec,
                                  const TruncationPolicy& truncation,
                                  int levels = 4);

}  // namespace circuitforge
