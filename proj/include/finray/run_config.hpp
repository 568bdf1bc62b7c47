#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "finray/dataset.hpp"
#include "finray/design_space.hpp"
#include "finray/mlp.hpp"
#include "finray/nsga2.hpp"
#include "finray/oracle.hpp"

namespace finray {

// Stage seeds derive from the global seed by fixed offsets so stages can be
// re-run independently yet reproducibly. An explicit "seed" key inside a stage
// block overrides the derived value.
inline constexpr std::uint64_t kOracleSeedOffset = 1;
inline constexpr std::uint64_t kSplitSeedOffset = 2;
inline constexpr std::uint64_t kTrainSeedOffset = 3;
inline constexpr std::uint64_t kNsgaSeedOffset = 4;
inline constexpr std::uint64_t kAnalysisSeedOffset = 5;

struct TrainingBlock {
    MlpConfig mlp;
    SplitRatios ratios;
    int k_folds = 5;
    std::optional<SearchSpace> grid; // grid_search block, when present
};

struct AnalysisBlock {
    std::size_t n_random = 10000;
    std::uint64_t seed = 0;
};

struct RunPaths {
    std::filesystem::path dataset = "out/dataset.csv";
    std::filesystem::path model = "out/model.json";
    std::filesystem::path front = "out/front.csv";
    std::filesystem::path reports = "out/reports";
};

struct RunConfig {
    std::uint64_t seed = 42;
    DesignSpace space = DesignSpace::default_space();
    OracleConfig oracle;
    TrainingBlock training;
    NsgaConfig nsga;
    AnalysisBlock analysis;
    RunPaths paths;
    std::uint64_t split_seed = 0;
};

// Defaults with all stage seeds derived from the default global seed.
RunConfig default_run_config();

// Parses and fully validates a config file. Unknown keys are rejected with the
// offending field named. seed_override replaces the global seed before stage
// seeds are derived (explicit per-block seeds still win).
RunConfig load_run_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override);

// Defaults, optionally overridden, without a file.
RunConfig make_run_config(std::optional<std::uint64_t> seed_override);

// JSON round trip for the design-space block:
//   {"t_beam": {"min","max","step"}, "t_cross": {...}, "spacing": {...}}
std::string design_space_to_json(const DesignSpace& space);
DesignSpace design_space_from_json(const std::string& text);

} // namespace finray
