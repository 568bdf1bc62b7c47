#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <utility>
#include <vector>

#include "finray/rng.hpp"

namespace finray {

// Minimization convention throughout; callers negate objectives they maximize.

struct NsgaConfig {
    int population_size = 500; // >= 4 and even
    int generations = 100;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1; // per-gene probability
    double sbx_eta = 15.0;
    double pm_eta = 20.0;
    std::uint64_t seed = 0;
};

void validate_nsga_config(const NsgaConfig& config);

struct Individual {
    std::vector<double> genes;      // each in [0,1]
    std::vector<double> objectives; // empty until evaluated
    int rank = -1;
    double crowding = 0.0;
};

// True iff a is no worse than b in every objective and strictly better in one.
bool dominates(const std::vector<double>& a, const std::vector<double>& b);

// Deb's fast non-dominated sort. Assigns ranks in place and returns the fronts
// as index lists: front 0 is the non-dominated set, front k the non-dominated
// set once fronts < k are removed.
std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::vector<Individual>& population);

// Crowding distance per front member. Boundary members along any objective get
// +infinity; interior members accumulate (next - prev)/(max - min) per
// objective; a degenerate objective (max == min) contributes nothing.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front_objectives);

// Binary tournament: two distinct uniform indices; lower rank wins, ties go to
// larger crowding, remaining ties to the first drawn.
std::size_t tournament_select(const std::vector<Individual>& population, Rng& rng);

// SBX spread factor for a uniform draw u:
//   beta = (2u)^(1/(eta+1))            for u <= 0.5
//   beta = (1/(2(1-u)))^(1/(eta+1))    otherwise
double sbx_spread(double u, double eta);

// One gene pair, unclamped: children symmetric about the parent mean.
std::pair<double, double> sbx_gene_pair(double p1, double p2, double u, double eta);

// Whole-vector SBX. With probability (1 - rate) the children are plain copies.
// Otherwise each gene crosses with probability 1/2 (inheriting both parent
// values exactly when it does not), drawing its own spread and swapping the
// two children with probability 1/2. Crossed genes are clamped to [0,1]; the
// parent mean per gene is preserved before clamping either way.
std::pair<std::vector<double>, std::vector<double>> sbx_crossover(const std::vector<double>& p1,
                                                                  const std::vector<double>& p2, double rate,
                                                                  double eta, Rng& rng);

// Polynomial-mutation perturbation (bounds [0,1]) for gene y and draw u.
double pm_delta(double y, double u, double eta);

// Mutates each gene independently with probability rate; result clamped to [0,1].
std::vector<double> polynomial_mutation(const std::vector<double>& genes, double rate, double eta, Rng& rng);

using Evaluator = std::function<std::vector<double>(const std::vector<double>& genes)>;

struct FrontMember {
    std::vector<double> genes;
    std::vector<double> objectives;
};
using ParetoFrontRaw = std::vector<FrontMember>;

struct GenerationStats {
    int gen = 0;
    std::size_t front_size = 0;
    std::vector<std::pair<double, double>> objective_range; // (min, max) per objective
};

struct NsgaResult {
    ParetoFrontRaw front; // rank-0 set of the final population, deduplicated
    std::vector<GenerationStats> stats;
};

// Observer sees each generation's rank-0 objective vectors (after truncation).
using GenerationObserver = std::function<void(int gen, const std::vector<std::vector<double>>& front_objectives)>;

// The generational loop: uniform seeded initialization, binary tournament
// selection, SBX, polynomial mutation, then (mu + lambda) truncation by
// (rank, crowding). Duplicate genomes (within 1e-12 per gene) are removed from
// the returned front, keeping first occurrences. The evaluator must return
// finite objectives for any genes in [0,1]^n.
NsgaResult nsga2_run(const Evaluator& evaluator, std::size_t n_genes, const NsgaConfig& config,
                     const GenerationObserver& observer = {});

// CSV `gen,front_size,min_f1,max_f1,min_f2,max_f2,...` per generation.
void write_stats_csv(const std::vector<GenerationStats>& stats, const std::filesystem::path& path);

} // namespace finray
