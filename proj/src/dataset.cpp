#include "finray/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "finray/errors.hpp"
#include "finray/rng.hpp"
#include "finray/text.hpp"

namespace finray {

namespace {

double record_column(const SimRecord& r, std::size_t col) {
    switch (col) {
    case 0: return r.design.t_beam;
    case 1: return r.design.t_cross;
    case 2: return r.design.spacing;
    case 3: return r.fx;
    case 4: return r.fy;
    case 5: return r.dx;
    default: return r.dy;
    }
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

} // namespace

void validate_record(const SimRecord& rec) {
    validate_design(rec.design);
    const std::array<std::pair<const char*, double>, 4> responses = {
        {{"fx_n", rec.fx}, {"fy_n", rec.fy}, {"dx_mm", rec.dx}, {"dy_mm", rec.dy}}};
    for (const auto& [name, v] : responses) {
        if (!std::isfinite(v))
            throw ValidationError(std::string(name) + " is not finite");
    }
    if (rec.fx < 0.0)
        throw ValidationError("fx_n must be non-negative, got " + format_double(rec.fx));
    if (rec.dx < 0.0)
        throw ValidationError("dx_mm must be non-negative, got " + format_double(rec.dx));
}

void Dataset::add(const SimRecord& rec) {
    validate_record(rec);
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (records_[i].design == rec.design)
            throw ValidationError("duplicate design (t_beam " + format_double(rec.design.t_beam) + ", t_cross " +
                                  format_double(rec.design.t_cross) + ", spacing " +
                                  format_double(rec.design.spacing) + ") already present at record " +
                                  std::to_string(i));
    }
    records_.push_back(rec);
}

Dataset read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open dataset file: " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(path.string() + ": empty file, expected header '" + kCsvHeader + "'");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kCsvHeader)
        throw ValidationError(path.string() + ": header mismatch, expected '" + kCsvHeader + "', got '" + line + "'");

    Dataset ds(Provenance::FileImported);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        ++row;
        const auto cells = split_line(line);
        if (cells.size() != 7)
            throw ValidationError(path.string() + " row " + std::to_string(row) + ": expected 7 columns, got " +
                                  std::to_string(cells.size()));
        std::array<double, 7> v{};
        for (std::size_t c = 0; c < 7; ++c) {
            try {
                v[c] = parse_double(cells[c], kColumnNames[c]);
            } catch (const ValidationError& e) {
                throw ValidationError(path.string() + " row " + std::to_string(row) + ": " + e.what());
            }
        }
        SimRecord rec{{v[0], v[1], v[2]}, v[3], v[4], v[5], v[6]};
        try {
            ds.add(rec);
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + " row " + std::to_string(row) + ": " + e.what());
        }
    }
    return ds;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary); // binary keeps \n line endings everywhere
    if (!out)
        throw IoError("cannot write dataset file: " + path.string());
    out << kCsvHeader << '\n';
    for (const auto& rec : dataset.records()) {
        for (std::size_t c = 0; c < 7; ++c) {
            if (c)
                out << ',';
            out << format_double(record_column(rec, c));
        }
        out << '\n';
    }
    if (!out)
        throw IoError("write failed: " + path.string());
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw ValidationError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()) + ")");
    const std::size_t n = x.size();
    if (n < 2)
        throw ValidationError("pearson: need at least 2 samples");
    const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - xbar;
        const double dy = y[i] - ybar;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ValidationError("pearson: correlation undefined for a constant vector");
    return sxy / std::sqrt(sxx * syy);
}

CorrelationMatrix correlation_matrix(const Dataset& dataset) {
    std::array<std::vector<double>, 7> cols;
    for (auto& c : cols)
        c.reserve(dataset.size());
    for (const auto& rec : dataset.records())
        for (std::size_t c = 0; c < 7; ++c)
            cols[c].push_back(record_column(rec, c));

    CorrelationMatrix m{};
    for (std::size_t i = 0; i < 7; ++i) {
        m[i][i] = 1.0;
        for (std::size_t j = i + 1; j < 7; ++j) {
            double r = 0.0;
            try {
                r = pearson(cols[i], cols[j]);
            } catch (const ValidationError& e) {
                throw ValidationError(std::string("correlation(") + kColumnNames[i] + ", " + kColumnNames[j] +
                                      "): " + e.what());
            }
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    return m;
}

void write_correlation_csv(const CorrelationMatrix& matrix, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write correlation file: " + path.string());
    out << "column";
    for (const char* name : kColumnNames)
        out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < 7; ++i) {
        out << kColumnNames[i];
        for (std::size_t j = 0; j < 7; ++j)
            out << ',' << format_double(matrix[i][j]);
        out << '\n';
    }
}

std::vector<std::size_t> SplitIndices::fold(int id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == id)
            out.push_back(i);
    return out;
}

SplitIndices split(std::size_t n_records, std::uint64_t seed, const SplitRatios& ratios, int k) {
    const double sum = ratios.train + ratios.val + ratios.test;
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("split ratios must sum to 1, got " + format_double(sum));
    if (!(ratios.train > 0.0) || !(ratios.val > 0.0) || !(ratios.test > 0.0))
        throw ValidationError("split ratios must each be positive (every part must be non-empty)");
    if (k < 2)
        throw ValidationError("k must be >= 2, got " + std::to_string(k));

    const auto n = static_cast<double>(n_records);
    const auto n_train = static_cast<std::size_t>(std::llround(n * ratios.train));
    const auto n_val = static_cast<std::size_t>(std::llround(n * ratios.val));
    if (n_train + n_val > n_records)
        throw ValidationError("split: rounded train+val exceeds record count");
    const std::size_t n_test = n_records - n_train - n_val;
    const std::size_t n_non_test = n_train + n_val;
    if (n_train == 0 || n_val == 0 || n_test == 0 || n_non_test < static_cast<std::size_t>(k)) {
        // smallest n with every part and fold non-empty under these ratios
        std::size_t need = std::max<std::size_t>(static_cast<std::size_t>(k) + 1, 3);
        for (; need < 1000000; ++need) {
            const auto t = static_cast<std::size_t>(std::llround(static_cast<double>(need) * ratios.train));
            const auto v = static_cast<std::size_t>(std::llround(static_cast<double>(need) * ratios.val));
            if (t >= 1 && v >= 1 && t + v <= need - 1 && t + v >= static_cast<std::size_t>(k))
                break;
        }
        throw ValidationError("split: " + std::to_string(n_records) + " records too few for ratios (" +
                              format_double(ratios.train) + ", " + format_double(ratios.val) + ", " +
                              format_double(ratios.test) + ") and k = " + std::to_string(k) + "; need at least " +
                              std::to_string(need));
    }

    std::vector<std::size_t> order(n_records);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    SplitIndices out;
    out.k = k;
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                   order.begin() + static_cast<std::ptrdiff_t>(n_non_test));
    out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_non_test), order.end());
    out.fold_of.assign(n_records, -1);

    const std::size_t base = n_non_test / static_cast<std::size_t>(k);
    const std::size_t extra = n_non_test % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        for (std::size_t i = 0; i < len; ++i, ++pos)
            out.fold_of[order[pos]] = f;
    }
    return out;
}

std::vector<OutlierNote> zscore_outliers(const Dataset& dataset, double threshold) {
    std::vector<OutlierNote> notes;
    const std::size_t n = dataset.size();
    if (n < 2)
        return notes;
    for (std::size_t c = 0; c < 7; ++c) {
        double mean = 0.0;
        for (const auto& rec : dataset.records())
            mean += record_column(rec, c);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& rec : dataset.records()) {
            const double d = record_column(rec, c) - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        const double sd = std::sqrt(var);
        if (sd == 0.0)
            continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (record_column(dataset[i], c) - mean) / sd;
            if (std::abs(z) > threshold)
                notes.push_back({i, kColumnNames[c], z});
        }
    }
    return notes;
}

} // namespace finray
