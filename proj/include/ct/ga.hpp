// Copyright 2026 The chainsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CT_GA_HPP
#define CT_GA_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ct/couplings.hpp"

namespace ct {

/// Genetic-algorithm settings for the chain-geometry search. One gene per
/// movable atom (every atom beyond the first three, which stay fixed).
struct GAConfig {
  int population_size = 1000;
  double survival_fraction = 0.5;
  double mutation_rate = 0.20;
  double mutation_sigma_frac = 0.05;  // Gaussian sigma as fraction of bound width
  double convergence_tol = 1e-3;
  int elite_window = 20;
  std::vector<std::pair<double, double>> bounds;  // per gene (m); empty = default
  std::uint64_t seed = 0;
  int max_generations = 200;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate(int n_genes) const;
};

/// Default per-gene search interval (m).
inline constexpr double kGeneLowerDefault = 0.0;
inline constexpr double kGeneUpperDefault = 3e-6;

/// Candidate geometry: gaps[i] is the distance between movable atom i and
/// the atom before it, so positions stay ordered by construction.
struct Genome {
  std::vector<double> gaps;  // m
};

struct Individual {
  Genome genome;
  double chi = 0.0;
};

struct GenerationStat {
  int generation = 0;  // 1-based
  double best_chi = 0.0;
  double median_chi = 0.0;
  std::vector<Individual> elite;  // ranked, elite_window entries
};

struct GAResult {
  std::vector<Individual> elite;  // final elite window, ranked best first
  Individual best;
  bool converged = false;
  int generations = 0;
  std::vector<GenerationStat> trace;
  long evaluations = 0;  // solver calls (cache misses)
  long cache_hits = 0;
};

using FitnessFn = std::function<double(const Genome&)>;

/// True when every gap clears the separation floor.
bool genome_feasible(const Genome& genome);

/// Chain built from the base configuration's first three atoms plus the
/// genome gaps; drives and bath settings are carried over.
ChainConfig displaced_chain_config(const ChainConfig& base, const Genome& genome);

/// Stationary efficiency of the displaced chain. Infeasible genomes and
/// solver failures map to -infinity so the search can discard them.
double fitness(const Genome& genome, const ChainConfig& base);

/// Generational search: rank, keep the top survival_fraction, refill by
/// blend crossover of surviving parents, mutate genes with probability
/// mutation_rate. Stops when the elite window agrees pairwise (genes and
/// efficiencies) within convergence_tol, or the generation budget runs out
/// (converged=false, best-so-far returned). Fixed seed gives an identical
/// trace; fitness evaluations are cached at 1 nm genome resolution.
GAResult optimize(const GAConfig& ga, const ChainConfig& base, int threads = 1);

/// As above with a caller-supplied fitness (used by tests).
GAResult optimize(const GAConfig& ga, const ChainConfig& base,
                  const FitnessFn& fn, int threads = 1);

}  // namespace ct

#endif  // CT_GA_HPP
