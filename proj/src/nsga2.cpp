#include "finray/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "finray/errors.hpp"
#include "finray/text.hpp"

namespace finray {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

bool same_genes(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12)
            return false;
    return true;
}

} // namespace

void validate_nsga_config(const NsgaConfig& config) {
    if (config.population_size < 4 || config.population_size % 2 != 0)
        throw ValidationError("population_size must be even and >= 4, got " +
                              std::to_string(config.population_size));
    if (config.generations < 1)
        throw ValidationError("generations must be >= 1, got " + std::to_string(config.generations));
    if (config.crossover_rate < 0.0 || config.crossover_rate > 1.0)
        throw ValidationError("crossover_rate must lie in [0,1], got " + format_double(config.crossover_rate));
    if (config.mutation_rate < 0.0 || config.mutation_rate > 1.0)
        throw ValidationError("mutation_rate must lie in [0,1], got " + format_double(config.mutation_rate));
    if (!(config.sbx_eta > 0.0) || !(config.pm_eta > 0.0))
        throw ValidationError("distribution indices sbx_eta and pm_eta must be positive");
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ValidationError("dominates: objective length mismatch (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i])
            return false;
        if (a[i] < b[i])
            strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::vector<Individual>& population) {
    const std::size_t n = population.size();
    for (const Individual& ind : population)
        if (ind.objectives.empty())
            throw ValidationError("fast_non_dominated_sort: unevaluated individual");

    std::vector<std::vector<std::size_t>> dominated(n); // S[p]: indices p dominates
    std::vector<std::size_t> dominators(n, 0);          // n[p]: how many dominate p
    std::vector<std::vector<std::size_t>> fronts(1);

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q)
                continue;
            if (dominates(population[p].objectives, population[q].objectives))
                dominated[p].push_back(q);
            else if (dominates(population[q].objectives, population[p].objectives))
                ++dominators[p];
        }
        if (dominators[p] == 0) {
            population[p].rank = 0;
            fronts[0].push_back(p);
        }
    }

    std::size_t i = 0;
    while (!fronts[i].empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[i]) {
            for (std::size_t q : dominated[p]) {
                if (--dominators[q] == 0) {
                    population[q].rank = static_cast<int>(i) + 1;
                    next.push_back(q);
                }
            }
        }
        ++i;
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front_objectives) {
    const std::size_t n = front_objectives.size();
    if (n == 0)
        throw ValidationError("crowding_distance: empty front");
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), kInf);
        return dist;
    }
    const std::size_t n_obj = front_objectives.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < n_obj; ++m) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front_objectives[a][m] < front_objectives[b][m]; });
        const double lo = front_objectives[order.front()][m];
        const double hi = front_objectives[order.back()][m];
        if (hi == lo)
            continue; // degenerate objective contributes nothing
        dist[order.front()] = kInf;
        dist[order.back()] = kInf;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            if (dist[order[j]] == kInf)
                continue;
            dist[order[j]] += (front_objectives[order[j + 1]][m] - front_objectives[order[j - 1]][m]) / (hi - lo);
        }
    }
    return dist;
}

std::size_t tournament_select(const std::vector<Individual>& population, Rng& rng) {
    if (population.size() < 2)
        throw ValidationError("tournament_select: population must have at least 2 members");
    const std::size_t a = rng.index(population.size());
    std::size_t b = a;
    while (b == a)
        b = rng.index(population.size());
    if (population[a].rank != population[b].rank)
        return population[a].rank < population[b].rank ? a : b;
    if (population[a].crowding != population[b].crowding)
        return population[a].crowding > population[b].crowding ? a : b;
    return a; // first drawn wins remaining ties
}

double sbx_spread(double u, double eta) {
    const double exponent = 1.0 / (eta + 1.0);
    if (u <= 0.5)
        return std::pow(2.0 * u, exponent);
    return std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
}

std::pair<double, double> sbx_gene_pair(double p1, double p2, double u, double eta) {
    const double beta = sbx_spread(u, eta);
    const double c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2);
    const double c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2);
    return {c1, c2};
}

std::pair<std::vector<double>, std::vector<double>> sbx_crossover(const std::vector<double>& p1,
                                                                  const std::vector<double>& p2, double rate,
                                                                  double eta, Rng& rng) {
    if (p1.size() != p2.size())
        throw ValidationError("sbx_crossover: parent length mismatch");
    std::vector<double> c1 = p1, c2 = p2;
    if (rng.uniform() > rate)
        return {std::move(c1), std::move(c2)};
    for (std::size_t g = 0; g < p1.size(); ++g) {
        // each gene crosses with probability 1/2 and inherits exactly otherwise;
        // crossed genes swap children with probability 1/2 (Deb's real-coded SBX)
        if (rng.uniform() >= 0.5)
            continue;
        auto [a, b] = sbx_gene_pair(p1[g], p2[g], rng.uniform(), eta);
        if (rng.uniform() < 0.5)
            std::swap(a, b);
        c1[g] = clamp01(a);
        c2[g] = clamp01(b);
    }
    return {std::move(c1), std::move(c2)};
}

double pm_delta(double y, double u, double eta) {
    // Deb's polynomial mutation against bounds [0,1]: delta1 = y, delta2 = 1-y.
    const double exponent = 1.0 / (eta + 1.0);
    if (u < 0.5) {
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - y, eta + 1.0);
        return std::pow(val, exponent) - 1.0;
    }
    const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(y, eta + 1.0);
    return 1.0 - std::pow(val, exponent);
}

std::vector<double> polynomial_mutation(const std::vector<double>& genes, double rate, double eta, Rng& rng) {
    std::vector<double> out = genes;
    for (double& y : out) {
        if (rng.uniform() < rate)
            y = clamp01(y + pm_delta(y, rng.uniform(), eta));
    }
    return out;
}

namespace {

std::vector<double> evaluate_genes(const Evaluator& evaluator, const std::vector<double>& genes) {
    std::vector<double> objectives = evaluator(genes);
    for (double o : objectives) {
        if (!std::isfinite(o)) {
            std::ostringstream msg;
            msg << "evaluator returned a non-finite objective for genes (";
            for (std::size_t g = 0; g < genes.size(); ++g)
                msg << (g ? ", " : "") << format_double(genes[g]);
            msg << ")";
            throw NumericError(msg.str());
        }
    }
    return objectives;
}

// Assigns ranks and per-front crowding, then truncates to mu members.
std::vector<Individual> truncate(std::vector<Individual> merged, std::size_t mu) {
    auto fronts = fast_non_dominated_sort(merged);
    for (const auto& front : fronts) {
        std::vector<std::vector<double>> objs;
        objs.reserve(front.size());
        for (std::size_t idx : front)
            objs.push_back(merged[idx].objectives);
        const auto dist = crowding_distance(objs);
        for (std::size_t j = 0; j < front.size(); ++j)
            merged[front[j]].crowding = dist[j];
    }

    std::vector<Individual> next;
    next.reserve(mu);
    for (auto& front : fronts) {
        if (next.size() == mu)
            break;
        if (next.size() + front.size() <= mu) {
            for (std::size_t idx : front)
                next.push_back(std::move(merged[idx]));
            continue;
        }
        // split front: largest crowding first, stable so earlier indices win ties
        std::stable_sort(front.begin(), front.end(),
                         [&](std::size_t a, std::size_t b) { return merged[a].crowding > merged[b].crowding; });
        for (std::size_t idx : front) {
            if (next.size() == mu)
                break;
            next.push_back(std::move(merged[idx]));
        }
    }
    return next;
}

} // namespace

NsgaResult nsga2_run(const Evaluator& evaluator, std::size_t n_genes, const NsgaConfig& config,
                     const GenerationObserver& observer) {
    validate_nsga_config(config);
    if (n_genes == 0)
        throw ValidationError("nsga2_run: need at least one gene");

    Rng rng(config.seed);
    const auto mu = static_cast<std::size_t>(config.population_size);

    std::vector<Individual> population(mu);
    for (Individual& ind : population) {
        ind.genes.resize(n_genes);
        for (double& g : ind.genes)
            g = rng.uniform();
        ind.objectives = evaluate_genes(evaluator, ind.genes);
    }
    population = truncate(std::move(population), mu); // assigns initial ranks/crowding

    NsgaResult result;
    result.stats.reserve(static_cast<std::size_t>(config.generations));

    for (int gen = 1; gen <= config.generations; ++gen) {
        std::vector<Individual> children;
        children.reserve(mu);
        while (children.size() < mu) {
            const std::size_t i1 = tournament_select(population, rng);
            const std::size_t i2 = tournament_select(population, rng);
            auto [g1, g2] = sbx_crossover(population[i1].genes, population[i2].genes, config.crossover_rate,
                                          config.sbx_eta, rng);
            g1 = polynomial_mutation(g1, config.mutation_rate, config.pm_eta, rng);
            g2 = polynomial_mutation(g2, config.mutation_rate, config.pm_eta, rng);
            Individual c1, c2;
            c1.genes = std::move(g1);
            c1.objectives = evaluate_genes(evaluator, c1.genes);
            children.push_back(std::move(c1));
            if (children.size() < mu) {
                c2.genes = std::move(g2);
                c2.objectives = evaluate_genes(evaluator, c2.genes);
                children.push_back(std::move(c2));
            }
        }

        std::vector<Individual> merged = std::move(population);
        merged.reserve(2 * mu);
        for (Individual& c : children)
            merged.push_back(std::move(c));
        population = truncate(std::move(merged), mu);

        std::vector<std::vector<double>> front_objs;
        for (const Individual& ind : population)
            if (ind.rank == 0)
                front_objs.push_back(ind.objectives);

        GenerationStats stats;
        stats.gen = gen;
        stats.front_size = front_objs.size();
        const std::size_t n_obj = front_objs.front().size();
        stats.objective_range.assign(n_obj, {kInf, -kInf});
        for (const auto& o : front_objs) {
            for (std::size_t m = 0; m < n_obj; ++m) {
                stats.objective_range[m].first = std::min(stats.objective_range[m].first, o[m]);
                stats.objective_range[m].second = std::max(stats.objective_range[m].second, o[m]);
            }
        }
        result.stats.push_back(std::move(stats));
        if (observer)
            observer(gen, front_objs);
    }

    for (const Individual& ind : population) {
        if (ind.rank != 0)
            continue;
        bool duplicate = false;
        for (const FrontMember& kept : result.front) {
            if (same_genes(kept.genes, ind.genes)) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate)
            result.front.push_back({ind.genes, ind.objectives});
    }
    return result;
}

void write_stats_csv(const std::vector<GenerationStats>& stats, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write statistics file: " + path.string());
    const std::size_t n_obj = stats.empty() ? 2 : stats.front().objective_range.size();
    out << "gen,front_size";
    for (std::size_t m = 1; m <= n_obj; ++m)
        out << ",min_f" << m << ",max_f" << m;
    out << '\n';
    for (const GenerationStats& s : stats) {
        out << s.gen << ',' << s.front_size;
        for (const auto& [lo, hi] : s.objective_range)
            out << ',' << format_double(lo) << ',' << format_double(hi);
        out << '\n';
    }
}

} // namespace finray
