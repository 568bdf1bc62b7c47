#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "finray/design_space.hpp"

namespace finray {

// The four response values at maximum base displacement.
struct Responses {
    double fx = 0.0; // N
    double fy = 0.0; // N
    double dx = 0.0; // mm
    double dy = 0.0; // mm
};

// One simulated structure: design plus the four responses at maximum base
// displacement.
struct SimRecord {
    DesignPoint design;
    double fx = 0.0; // contact force along x, N (>= 0)
    double fy = 0.0; // contact force along y, N
    double dx = 0.0; // tip displacement along x, mm (>= 0)
    double dy = 0.0; // tip displacement along y, mm
};

// Throws ValidationError naming the offending response.
void validate_record(const SimRecord& rec);

enum class Provenance { OracleGenerated, FileImported };

// Ordered collection of records with unique designs.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(Provenance provenance, std::optional<std::uint64_t> seed = std::nullopt)
        : provenance_(provenance), seed_(seed) {}

    // Validates the record and rejects duplicate designs.
    void add(const SimRecord& rec);

    const std::vector<SimRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const SimRecord& operator[](std::size_t i) const { return records_[i]; }

    Provenance provenance() const { return provenance_; }
    std::optional<std::uint64_t> seed() const { return seed_; }

private:
    std::vector<SimRecord> records_;
    Provenance provenance_ = Provenance::FileImported;
    std::optional<std::uint64_t> seed_;
};

// Column labels shared by the dataset CSV schema and the correlation matrix.
inline constexpr std::array<const char*, 7> kColumnNames = {"t_beam_mm", "t_cross_mm", "spacing_mm",
                                                            "fx_n",      "fy_n",       "dx_mm",
                                                            "dy_mm"};
inline constexpr const char* kCsvHeader = "t_beam_mm,t_cross_mm,spacing_mm,fx_n,fy_n,dx_mm,dy_mm";

// CSV ingestion/emission. Write-then-read reproduces every value exactly (the
// writer emits shortest round-trip decimals). Errors identify row and column.
Dataset read_csv(const std::filesystem::path& path);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

// Pearson correlation coefficient:
//   r = sum((x_i - xbar)(y_i - ybar)) / sqrt(sum((x_i - xbar)^2) sum((y_i - ybar)^2))
// Requires equal lengths >= 2 and non-constant vectors.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

using CorrelationMatrix = std::array<std::array<double, 7>, 7>;

// 7x7 symmetric matrix over (t_beam, t_cross, spacing, fx, fy, dx, dy).
// Pearson errors propagate with column names attached.
CorrelationMatrix correlation_matrix(const Dataset& dataset);

// Labeled CSV: header row and leading label column use kColumnNames.
void write_correlation_csv(const CorrelationMatrix& matrix, const std::filesystem::path& path);

struct SplitRatios {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

// Disjoint train/validation/test index lists plus K-fold assignments over the
// non-test portion. fold_of[i] is the fold id in [0, k) for non-test indices
// and -1 for test indices.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
    std::vector<int> fold_of;
    int k = 0;

    std::vector<std::size_t> fold(int id) const;
};

// Deterministic shuffled split. One Fisher-Yates pass with Rng(seed) orders the
// indices; the first n*train of them become train, then val, then test. Folds
// partition the non-test portion of the same order into k contiguous blocks,
// the first (n_non_test mod k) blocks one element larger.
SplitIndices split(std::size_t n_records, std::uint64_t seed, const SplitRatios& ratios, int k);

// Rows whose per-column z-score magnitude exceeds `threshold`. Reported as
// warnings by callers; records are never dropped.
struct OutlierNote {
    std::size_t row;
    std::string column;
    double z;
};
std::vector<OutlierNote> zscore_outliers(const Dataset& dataset, double threshold = 3.0);

} // namespace finray
