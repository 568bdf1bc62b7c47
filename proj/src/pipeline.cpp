#include "finray/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "finray/errors.hpp"
#include "finray/text.hpp"

namespace finray {

using nlohmann::json;

namespace {

constexpr const char* kFrontHeader = "t_beam_mm,t_cross_mm,spacing_mm,f_n,d_mm,label";

// a dominates b in (f, d) maximization space
bool dominates_max(const ObjectivePair& a, const ObjectivePair& b) {
    if (a.f < b.f || a.d < b.d)
        return false;
    return a.f > b.f || a.d > b.d;
}

} // namespace

ObjectivePair compose_objectives(const Responses& r) {
    if (!std::isfinite(r.fx) || !std::isfinite(r.fy) || !std::isfinite(r.dx) || !std::isfinite(r.dy))
        throw ValidationError("compose_objectives: non-finite responses");
    return {std::hypot(r.fx, r.fy), std::hypot(r.dx, r.dy)};
}

Evaluator make_evaluator(const MlpModel& model) {
    return [&model](const std::vector<double>& genes) {
        if (genes.size() != kInputWidth)
            throw ValidationError("evaluator expects 3 genes, got " + std::to_string(genes.size()));
        const auto out = unscale_row(model.forward(genes), model.target_scaler());
        const ObjectivePair obj = compose_objectives({out[0], out[1], out[2], out[3]});
        return std::vector<double>{-obj.f, -obj.d};
    };
}

std::vector<DesignSolution> decode_front(const ParetoFrontRaw& raw, const MlpModel& model) {
    std::vector<DesignSolution> front;
    front.reserve(raw.size());
    for (const FrontMember& member : raw) {
        const auto design = unscale_row(member.genes, model.input_scaler());
        DesignSolution sol;
        sol.design = {design[0], design[1], design[2]};
        validate_design(sol.design);
        sol.objectives = {-member.objectives[0], -member.objectives[1]};
        front.push_back(std::move(sol));
    }
    return front;
}

SelectedPoints select_points(std::vector<DesignSolution>& front) {
    if (front.empty())
        throw ValidationError("select_points: empty front");

    SelectedPoints sel;
    for (std::size_t i = 1; i < front.size(); ++i) {
        if (front[i].objectives.d > front[sel.a].objectives.d)
            sel.a = i;
        if (front[i].objectives.f > front[sel.b].objectives.f)
            sel.b = i;
    }

    double f_lo = front[0].objectives.f, f_hi = f_lo;
    double d_lo = front[0].objectives.d, d_hi = d_lo;
    for (const DesignSolution& s : front) {
        f_lo = std::min(f_lo, s.objectives.f);
        f_hi = std::max(f_hi, s.objectives.f);
        d_lo = std::min(d_lo, s.objectives.d);
        d_hi = std::max(d_hi, s.objectives.d);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < front.size(); ++i) {
        // a degenerate axis drops out of the distance
        const double fn = f_hi > f_lo ? (front[i].objectives.f - f_lo) / (f_hi - f_lo) : 1.0;
        const double dn = d_hi > d_lo ? (front[i].objectives.d - d_lo) / (d_hi - d_lo) : 1.0;
        const double dist = std::hypot(1.0 - fn, 1.0 - dn);
        if (dist < best) {
            best = dist;
            sel.c = i;
        }
    }

    for (DesignSolution& s : front)
        s.label.clear();
    front[sel.a].label += "A";
    front[sel.b].label += "B";
    front[sel.c].label += "C";
    return sel;
}

ValidationReport validate_front(const std::vector<DesignSolution>& front, const MlpModel& model,
                                std::size_t n_random, std::uint64_t seed) {
    if (n_random < 1)
        throw ValidationError("validate_front: n_random must be >= 1");
    if (front.empty())
        throw ValidationError("validate_front: empty front");

    Rng rng(seed);
    ValidationReport report;
    report.n_samples = n_random;
    for (std::size_t s = 0; s < n_random; ++s) {
        std::vector<double> genes(kInputWidth);
        for (double& g : genes)
            g = rng.uniform();
        const auto out = unscale_row(model.forward(genes), model.target_scaler());
        const ObjectivePair obj = compose_objectives({out[0], out[1], out[2], out[3]});
        bool dominates_any = false;
        for (const DesignSolution& member : front) {
            if (dominates_max(obj, member.objectives)) {
                dominates_any = true;
                break;
            }
        }
        if (dominates_any) {
            ++report.n_dominating;
            report.violations.push_back({std::move(genes), obj});
        }
    }
    return report;
}

double percent_error(double predicted, double truth) {
    if (truth == 0.0)
        throw ValidationError("percent_error: truth value is zero");
    return 100.0 * std::abs(predicted - truth) / std::abs(truth);
}

std::vector<ComparisonRow> compare_to_truth(const std::vector<DesignSolution>& front, const OracleConfig& oracle) {
    if (oracle.noise_sigma != 0.0)
        throw ValidationError("compare_to_truth: ground truth requires a noise-free oracle");
    std::vector<ComparisonRow> rows;
    for (const DesignSolution& s : front) {
        if (s.label.empty())
            continue;
        const ObjectivePair truth = compose_objectives(oracle_evaluate(s.design, oracle));
        ComparisonRow row;
        row.label = s.label;
        row.predicted = s.objectives;
        row.truth = truth;
        row.err_f_pct = percent_error(s.objectives.f, truth.f);
        row.err_d_pct = percent_error(s.objectives.d, truth.d);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_front_csv(const std::vector<DesignSolution>& front, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write front file: " + path.string());
    out << kFrontHeader << '\n';
    for (const DesignSolution& s : front) {
        out << format_double(s.design.t_beam) << ',' << format_double(s.design.t_cross) << ','
            << format_double(s.design.spacing) << ',' << format_double(s.objectives.f) << ','
            << format_double(s.objectives.d) << ',' << s.label << '\n';
    }
    if (!out)
        throw IoError("write failed: " + path.string());
}

std::vector<DesignSolution> read_front_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open front file: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(path.string() + ": empty file, expected header '" + std::string(kFrontHeader) + "'");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kFrontHeader)
        throw ValidationError(path.string() + ": header mismatch, expected '" + std::string(kFrontHeader) + "'");

    std::vector<DesignSolution> front;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        ++row;
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (line.back() == ',')
            cells.emplace_back();
        if (cells.size() != 6)
            throw ValidationError(path.string() + " row " + std::to_string(row) + ": expected 6 columns, got " +
                                  std::to_string(cells.size()));
        DesignSolution s;
        const std::string ctx = path.string() + " row " + std::to_string(row);
        s.design.t_beam = parse_double(cells[0], ctx + " t_beam_mm");
        s.design.t_cross = parse_double(cells[1], ctx + " t_cross_mm");
        s.design.spacing = parse_double(cells[2], ctx + " spacing_mm");
        s.objectives.f = parse_double(cells[3], ctx + " f_n");
        s.objectives.d = parse_double(cells[4], ctx + " d_mm");
        s.label = cells[5];
        try {
            validate_design(s.design);
        } catch (const ValidationError& e) {
            throw ValidationError(ctx + ": " + e.what());
        }
        front.push_back(std::move(s));
    }
    return front;
}

void write_validation_json(const ValidationReport& report, const std::filesystem::path& path) {
    json j;
    j["prng"] = kPrngName;
    j["n_samples"] = report.n_samples;
    j["n_dominating"] = report.n_dominating;
    j["violations"] = json::array();
    for (const Violation& v : report.violations) {
        j["violations"].push_back({{"genes", v.genes}, {"f_n", v.objectives.f}, {"d_mm", v.objectives.d}});
    }
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write validation report: " + path.string());
    out << j.dump(2) << '\n';
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write comparison file: " + path.string());
    out << "label,pred_d_mm,pred_f_n,truth_d_mm,truth_f_n,err_d_pct,err_f_pct\n";
    for (const ComparisonRow& r : rows) {
        out << r.label << ',' << format_double(r.predicted.d) << ',' << format_double(r.predicted.f) << ','
            << format_double(r.truth.d) << ',' << format_double(r.truth.f) << ',' << format_double(r.err_d_pct) << ','
            << format_double(r.err_f_pct) << '\n';
    }
}

} // namespace finray
