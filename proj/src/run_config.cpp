#include "finray/run_config.hpp"

#include <fstream>

#include <json.hpp>

#include "finray/errors.hpp"

namespace finray {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& context) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known)
            throw ValidationError("unknown config field '" + (context.empty() ? key : context + "." + key) + "'");
    }
}

template <typename T>
T get_field(const json& obj, const char* key, T fallback, const std::string& context) {
    if (!obj.contains(key))
        return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config field '" + context + "." + key + "' has the wrong type");
    }
}

// json silently wraps negative integers into unsigned types; reject instead
std::uint64_t get_u64(const json& obj, const char* key, std::uint64_t fallback, const std::string& context) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (v.is_number_integer() && v.get<long long>() < 0)
        throw ValidationError("config field '" + (context.empty() ? std::string(key) : context + "." + key) +
                              "' must be non-negative");
    return get_field<std::uint64_t>(obj, key, fallback, context);
}

VarRange parse_range(const json& obj, const char* name) {
    if (!obj.contains(name))
        throw ValidationError(std::string("design_space block missing '") + name + "'");
    const json& rj = obj.at(name);
    if (!rj.is_object())
        throw ValidationError(std::string("design_space.") + name + " must be an object {min, max, step}");
    check_keys(rj, {"min", "max", "step"}, std::string("design_space.") + name);
    VarRange r;
    const std::string ctx = std::string("design_space.") + name;
    if (!rj.contains("min") || !rj.contains("max") || !rj.contains("step"))
        throw ValidationError(ctx + " needs min, max and step");
    r.min = get_field<double>(rj, "min", 0.0, ctx);
    r.max = get_field<double>(rj, "max", 0.0, ctx);
    r.step = get_field<double>(rj, "step", 0.0, ctx);
    return r;
}

DesignSpace parse_design_space(const json& obj) {
    check_keys(obj, {"t_beam", "t_cross", "spacing"}, "design_space");
    DesignSpace space;
    space.t_beam = parse_range(obj, "t_beam");
    space.t_cross = parse_range(obj, "t_cross");
    space.spacing = parse_range(obj, "spacing");
    validate_space(space);
    return space;
}

json range_json(const VarRange& r) {
    return {{"min", r.min}, {"max", r.max}, {"step", r.step}};
}

RunConfig from_json(const json& j, std::optional<std::uint64_t> seed_override) {
    check_keys(j, {"seed", "design_space", "oracle", "training", "nsga", "analysis", "paths"}, "");

    RunConfig cfg;
    cfg.seed = get_u64(j, "seed", cfg.seed, "");
    if (seed_override)
        cfg.seed = *seed_override;

    if (j.contains("design_space"))
        cfg.space = parse_design_space(j.at("design_space"));

    cfg.oracle.seed = cfg.seed + kOracleSeedOffset;
    if (j.contains("oracle")) {
        const json& oj = j.at("oracle");
        check_keys(oj, {"noise_sigma", "seed"}, "oracle");
        cfg.oracle.noise_sigma = get_field<double>(oj, "noise_sigma", 0.0, "oracle");
        cfg.oracle.seed = get_u64(oj, "seed", cfg.oracle.seed, "oracle");
        validate_oracle_config(cfg.oracle);
    }

    cfg.split_seed = cfg.seed + kSplitSeedOffset;
    cfg.training.mlp.seed = cfg.seed + kTrainSeedOffset;
    if (j.contains("training")) {
        const json& tj = j.at("training");
        check_keys(tj,
                   {"hidden_sizes", "hidden_activation", "dropout_rate", "learning_rate", "batch_size", "epochs",
                    "ratios", "k_folds", "seed", "grid_search"},
                   "training");
        MlpConfig& m = cfg.training.mlp;
        if (tj.contains("hidden_sizes")) {
            const auto sizes = get_field<std::vector<int>>(tj, "hidden_sizes", {}, "training");
            if (sizes.size() != 3)
                throw ValidationError("training.hidden_sizes must list exactly 3 layer widths");
            m.hidden_sizes = {sizes[0], sizes[1], sizes[2]};
        }
        if (tj.contains("hidden_activation"))
            m.hidden_activation =
                activation_from_name(get_field<std::string>(tj, "hidden_activation", "relu", "training"));
        m.dropout_rate = get_field<double>(tj, "dropout_rate", m.dropout_rate, "training");
        m.learning_rate = get_field<double>(tj, "learning_rate", m.learning_rate, "training");
        m.batch_size = get_field<int>(tj, "batch_size", m.batch_size, "training");
        m.epochs = get_field<int>(tj, "epochs", m.epochs, "training");
        m.seed = get_u64(tj, "seed", m.seed, "training");
        validate_mlp_config(m);
        if (tj.contains("ratios")) {
            const auto r = get_field<std::vector<double>>(tj, "ratios", {}, "training");
            if (r.size() != 3)
                throw ValidationError("training.ratios must list train, validation and test fractions");
            cfg.training.ratios = {r[0], r[1], r[2]};
        }
        cfg.training.k_folds = get_field<int>(tj, "k_folds", cfg.training.k_folds, "training");
        if (cfg.training.k_folds < 2)
            throw ValidationError("training.k_folds must be >= 2");
        if (tj.contains("grid_search")) {
            const json& gj = tj.at("grid_search");
            check_keys(gj, {"h1", "h2", "h3", "activations"}, "training.grid_search");
            SearchSpace space;
            space.h1 = get_field<std::vector<int>>(gj, "h1", {}, "training.grid_search");
            space.h2 = get_field<std::vector<int>>(gj, "h2", {}, "training.grid_search");
            space.h3 = get_field<std::vector<int>>(gj, "h3", {}, "training.grid_search");
            for (const std::string& name :
                 get_field<std::vector<std::string>>(gj, "activations", {}, "training.grid_search"))
                space.activations.push_back(activation_from_name(name));
            if (space.size() == 0)
                throw ValidationError("training.grid_search lists no configurations");
            for (const auto* list : {&space.h1, &space.h2, &space.h3})
                for (int h : *list)
                    if (h < 1)
                        throw ValidationError("training.grid_search hidden sizes must be positive");
            cfg.training.grid = std::move(space);
        }
    }

    cfg.nsga.seed = cfg.seed + kNsgaSeedOffset;
    if (j.contains("nsga")) {
        const json& nj = j.at("nsga");
        check_keys(nj,
                   {"population_size", "generations", "crossover_rate", "mutation_rate", "sbx_eta", "pm_eta", "seed"},
                   "nsga");
        cfg.nsga.population_size = get_field<int>(nj, "population_size", cfg.nsga.population_size, "nsga");
        cfg.nsga.generations = get_field<int>(nj, "generations", cfg.nsga.generations, "nsga");
        cfg.nsga.crossover_rate = get_field<double>(nj, "crossover_rate", cfg.nsga.crossover_rate, "nsga");
        cfg.nsga.mutation_rate = get_field<double>(nj, "mutation_rate", cfg.nsga.mutation_rate, "nsga");
        cfg.nsga.sbx_eta = get_field<double>(nj, "sbx_eta", cfg.nsga.sbx_eta, "nsga");
        cfg.nsga.pm_eta = get_field<double>(nj, "pm_eta", cfg.nsga.pm_eta, "nsga");
        cfg.nsga.seed = get_u64(nj, "seed", cfg.nsga.seed, "nsga");
        validate_nsga_config(cfg.nsga);
    }

    cfg.analysis.seed = cfg.seed + kAnalysisSeedOffset;
    if (j.contains("analysis")) {
        const json& aj = j.at("analysis");
        check_keys(aj, {"n_random", "seed"}, "analysis");
        cfg.analysis.n_random = static_cast<std::size_t>(get_u64(aj, "n_random", cfg.analysis.n_random, "analysis"));
        if (cfg.analysis.n_random < 1)
            throw ValidationError("analysis.n_random must be >= 1");
        cfg.analysis.seed = get_u64(aj, "seed", cfg.analysis.seed, "analysis");
    }

    if (j.contains("paths")) {
        const json& pj = j.at("paths");
        check_keys(pj, {"dataset", "model", "front", "reports"}, "paths");
        cfg.paths.dataset = get_field<std::string>(pj, "dataset", cfg.paths.dataset.string(), "paths");
        cfg.paths.model = get_field<std::string>(pj, "model", cfg.paths.model.string(), "paths");
        cfg.paths.front = get_field<std::string>(pj, "front", cfg.paths.front.string(), "paths");
        cfg.paths.reports = get_field<std::string>(pj, "reports", cfg.paths.reports.string(), "paths");
        for (const auto* p : {&cfg.paths.dataset, &cfg.paths.model, &cfg.paths.front, &cfg.paths.reports})
            if (p->empty())
                throw ValidationError("paths entries must be non-empty");
    }

    return cfg;
}

} // namespace

RunConfig default_run_config() {
    return from_json(json::object(), std::nullopt);
}

RunConfig make_run_config(std::optional<std::uint64_t> seed_override) {
    return from_json(json::object(), seed_override);
}

RunConfig load_run_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("config parse error in " + path.string() + ": " + e.what());
    }
    if (!j.is_object())
        throw ValidationError("config root must be a JSON object");
    return from_json(j, seed_override);
}

std::string design_space_to_json(const DesignSpace& space) {
    const json j{{"t_beam", range_json(space.t_beam)},
                 {"t_cross", range_json(space.t_cross)},
                 {"spacing", range_json(space.spacing)}};
    return j.dump(2);
}

DesignSpace design_space_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("design_space parse error: ") + e.what());
    }
    return parse_design_space(j);
}

} // namespace finray
