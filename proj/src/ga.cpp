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

#include "ct/ga.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ct/fluxes.hpp"
#include "ct/parallel.hpp"
#include "ct/steady.hpp"

namespace ct {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 1 nm quantization key; genomes this close are treated as the same point.
std::string cache_key(const Genome& genome) {
  std::string key;
  key.reserve(genome.gaps.size() * sizeof(long long));
  for (double g : genome.gaps) {
    const long long q = std::llround(g * 1e9);
    char buf[sizeof(long long)];
    std::memcpy(buf, &q, sizeof(q));
    key.append(buf, sizeof(q));
  }
  return key;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

// chi descending; ties broken by the genes so ranking is deterministic.
bool better(const Individual& a, const Individual& b) {
  if (a.chi != b.chi) return a.chi > b.chi;
  return a.genome.gaps < b.genome.gaps;
}

void clamp_to_bounds(Genome& genome,
                     const std::vector<std::pair<double, double>>& bounds) {
  for (std::size_t i = 0; i < genome.gaps.size(); ++i) {
    const double lo = std::max(bounds[i].first, kSeparationFloor);
    genome.gaps[i] = std::clamp(genome.gaps[i], lo, bounds[i].second);
  }
}

bool elite_converged(const std::vector<Individual>& pop, int window,
                     double tol) {
  const int n = std::min<int>(window, static_cast<int>(pop.size()));
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(pop[i].chi)) return false;
    for (int j = i + 1; j < n; ++j) {
      if (rel_diff(pop[i].chi, pop[j].chi) > tol) return false;
      for (std::size_t g = 0; g < pop[i].genome.gaps.size(); ++g) {
        if (rel_diff(pop[i].genome.gaps[g], pop[j].genome.gaps[g]) > tol)
          return false;
      }
    }
  }
  return true;
}

class FitnessCache {
 public:
  explicit FitnessCache(const FitnessFn& fn) : fn_(fn) {}

  // Fills ind.chi for every individual; unknown genomes are evaluated on the
  // worker pool, known ones come from the cache. Deterministic under any
  // thread count because fitness is a pure function of the genome.
  void evaluate(std::vector<Individual>& pop, int threads, long& evaluations,
                long& cache_hits) {
    std::vector<int> pending;          // indices into pop needing a solve
    std::vector<std::string> keys(pop.size());
    std::unordered_map<std::string, int> first_seen;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      keys[i] = cache_key(pop[i].genome);
      if (values_.count(keys[i]) != 0) {
        ++cache_hits;
        continue;
      }
      if (first_seen.emplace(keys[i], static_cast<int>(i)).second)
        pending.push_back(static_cast<int>(i));
      else
        ++cache_hits;
    }
    std::vector<double> results(pending.size());
    parallel_for(static_cast<int>(pending.size()), threads, [&](int k) {
      results[static_cast<std::size_t>(k)] =
          fn_(pop[static_cast<std::size_t>(pending[static_cast<std::size_t>(k)])]
                  .genome);
    });
    for (std::size_t k = 0; k < pending.size(); ++k)
      values_[keys[static_cast<std::size_t>(pending[k])]] = results[k];
    evaluations += static_cast<long>(pending.size());
    for (std::size_t i = 0; i < pop.size(); ++i) pop[i].chi = values_[keys[i]];
  }

 private:
  FitnessFn fn_;
  std::unordered_map<std::string, double> values_;
};

}  // namespace

void GAConfig::validate(int n_genes) const {
  if (n_genes < 1)
    throw std::invalid_argument("GA needs at least one movable atom");
  if (population_size < 2 * elite_window)
    throw std::invalid_argument(
        "population_size must be at least twice the elite window");
  if (elite_window < 1) throw std::invalid_argument("elite_window must be >= 1");
  if (!(mutation_rate > 0.0 && mutation_rate < 1.0))
    throw std::invalid_argument("mutation_rate must lie in (0, 1)");
  if (!(survival_fraction > 0.0 && survival_fraction <= 0.9))
    throw std::invalid_argument("survival_fraction must lie in (0, 0.9]");
  if (!(convergence_tol > 0.0))
    throw std::invalid_argument("convergence_tol must be positive");
  if (max_generations < 1)
    throw std::invalid_argument("max_generations must be >= 1");
  if (!bounds.empty() && static_cast<int>(bounds.size()) != n_genes)
    throw std::invalid_argument("bounds size must match the gene count");
  for (const auto& [lo, hi] : bounds) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
      throw std::invalid_argument("gene bounds must be finite with lo <= hi");
    if (hi < kSeparationFloor)
      throw std::invalid_argument(
          "gene upper bound lies below the separation floor");
  }
}

bool genome_feasible(const Genome& genome) {
  for (double g : genome.gaps) {
    if (!std::isfinite(g) || g < kSeparationFloor) return false;
  }
  return true;
}

ChainConfig displaced_chain_config(const ChainConfig& base, const Genome& genome) {
  if (base.positions.size() < 3)
    throw std::invalid_argument("base chain must keep at least three atoms fixed");
  ChainConfig c = base;
  c.positions.resize(3);
  c.positions.assign(base.positions.begin(), base.positions.begin() + 3);
  for (double g : genome.gaps) c.positions.push_back(c.positions.back() + g);
  return c;
}

double fitness(const Genome& genome, const ChainConfig& base) {
  if (!genome_feasible(genome)) return kNegInf;
  try {
    const ChainConfig c = displaced_chain_config(base, genome);
    c.validate();
    const CouplingTables tables = build_coupling_tables(c);
    return efficiency(c, tables).chi;
  } catch (const std::exception&) {
    return kNegInf;
  }
}

GAResult optimize(const GAConfig& ga, const ChainConfig& base, int threads) {
  return optimize(
      ga, base, [&base](const Genome& g) { return fitness(g, base); }, threads);
}

GAResult optimize(const GAConfig& ga, const ChainConfig& base,
                  const FitnessFn& fn, int threads) {
  const int n_genes = static_cast<int>(base.positions.size()) - 3;
  ga.validate(n_genes);

  std::vector<std::pair<double, double>> bounds = ga.bounds;
  if (bounds.empty())
    bounds.assign(static_cast<std::size_t>(n_genes),
                  {kGeneLowerDefault, kGeneUpperDefault});

  std::mt19937_64 rng(ga.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Individual> pop(static_cast<std::size_t>(ga.population_size));
  for (Individual& ind : pop) {
    ind.genome.gaps.resize(static_cast<std::size_t>(n_genes));
    for (int g = 0; g < n_genes; ++g) {
      const auto& [lo, hi] = bounds[static_cast<std::size_t>(g)];
      ind.genome.gaps[static_cast<std::size_t>(g)] = lo + unit(rng) * (hi - lo);
    }
    clamp_to_bounds(ind.genome, bounds);
  }

  GAResult result;
  FitnessCache cache(fn);
  cache.evaluate(pop, threads, result.evaluations, result.cache_hits);

  const int n_survivors = std::max(
      ga.elite_window,
      static_cast<int>(std::lround(ga.population_size * ga.survival_fraction)));

  for (int gen = 1; gen <= ga.max_generations; ++gen) {
    std::sort(pop.begin(), pop.end(), better);

    GenerationStat stat;
    stat.generation = gen;
    stat.best_chi = pop.front().chi;
    stat.median_chi = pop[pop.size() / 2].chi;
    stat.elite.assign(pop.begin(),
                      pop.begin() + std::min<std::size_t>(
                                        pop.size(),
                                        static_cast<std::size_t>(ga.elite_window)));
    result.trace.push_back(stat);
    result.generations = gen;

    if (elite_converged(pop, ga.elite_window, ga.convergence_tol)) {
      result.converged = true;
      break;
    }
    if (gen == ga.max_generations) break;

    // Survivors carry over unchanged; the rest of the population is refilled
    // by blend crossover of two surviving parents followed by mutation.
    std::uniform_int_distribution<int> pick(0, n_survivors - 1);
    pop.resize(static_cast<std::size_t>(n_survivors));
    while (static_cast<int>(pop.size()) < ga.population_size) {
      const Individual& pa = pop[static_cast<std::size_t>(pick(rng))];
      const Individual& pb = pop[static_cast<std::size_t>(pick(rng))];
      Individual child;
      child.genome.gaps.resize(static_cast<std::size_t>(n_genes));
      for (int g = 0; g < n_genes; ++g) {
        const double w = unit(rng);
        child.genome.gaps[static_cast<std::size_t>(g)] =
            w * pa.genome.gaps[static_cast<std::size_t>(g)] +
            (1.0 - w) * pb.genome.gaps[static_cast<std::size_t>(g)];
      }
      for (int g = 0; g < n_genes; ++g) {
        if (unit(rng) < ga.mutation_rate) {
          const auto& [lo, hi] = bounds[static_cast<std::size_t>(g)];
          std::normal_distribution<double> kick(
              0.0, ga.mutation_sigma_frac * (hi - lo));
          child.genome.gaps[static_cast<std::size_t>(g)] += kick(rng);
        }
      }
      clamp_to_bounds(child.genome, bounds);
      pop.push_back(std::move(child));
    }
    cache.evaluate(pop, threads, result.evaluations, result.cache_hits);
  }

  result.elite.assign(
      pop.begin(),
      pop.begin() + std::min<std::size_t>(
                        pop.size(), static_cast<std::size_t>(ga.elite_window)));
  result.best = result.elite.front();
  return result;
}

}  // namespace ct
