#include "finray/design_space.hpp"

#include <cmath>
#include <limits>

#include "finray/errors.hpp"
#include "finray/text.hpp"

namespace finray {

namespace {

void check_field(double v, double lo, double hi, const char* name) {
    if (!std::isfinite(v))
        throw ValidationError(std::string(name) + " is not finite");
    if (v <= 0.0)
        throw ValidationError(std::string(name) + " must be strictly positive, got " + format_double(v));
    if (v < lo || v > hi)
        throw ValidationError(std::string(name) + " = " + format_double(v) + " outside bounds [" +
                              format_double(lo) + ", " + format_double(hi) + "]");
}

std::size_t range_count(const VarRange& r, double lo, double hi, const char* name) {
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || !std::isfinite(r.step))
        throw ValidationError(std::string(name) + ": range values must be finite");
    if (r.min > r.max)
        throw ValidationError(std::string(name) + ": min " + format_double(r.min) + " exceeds max " +
                              format_double(r.max));
    if (r.min < lo || r.max > hi)
        throw ValidationError(std::string(name) + ": range [" + format_double(r.min) + ", " +
                              format_double(r.max) + "] leaves bounds [" + format_double(lo) + ", " +
                              format_double(hi) + "]");
    if (r.step <= 0.0)
        throw ValidationError(std::string(name) + ": step must be positive, got " + format_double(r.step));
    const double span = r.max - r.min;
    const double steps = span / r.step;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) * r.step > 1e-9)
        throw ValidationError(std::string(name) + ": step " + format_double(r.step) +
                              " does not evenly divide range " + format_double(span));
    return static_cast<std::size_t>(rounded) + 1;
}

} // namespace

void validate_design(const DesignPoint& p) {
    check_field(p.t_beam, kTBeamMin, kTBeamMax, "t_beam");
    check_field(p.t_cross, kTCrossMin, kTCrossMax, "t_cross");
    check_field(p.spacing, kSpacingMin, kSpacingMax, "spacing");
}

DesignSpace DesignSpace::default_space() {
    return DesignSpace{{kTBeamMin, kTBeamMax, 0.5}, {kTCrossMin, kTCrossMax, 0.2}, {kSpacingMin, kSpacingMax, 2.0}};
}

void validate_space(const DesignSpace& space) {
    grid_counts(space);
}

std::array<std::size_t, 3> grid_counts(const DesignSpace& space) {
    return {range_count(space.t_beam, kTBeamMin, kTBeamMax, "t_beam"),
            range_count(space.t_cross, kTCrossMin, kTCrossMax, "t_cross"),
            range_count(space.spacing, kSpacingMin, kSpacingMax, "spacing")};
}

std::vector<DesignPoint> enumerate_grid(const DesignSpace& space) {
    const auto n = grid_counts(space);
    std::vector<DesignPoint> grid;
    grid.reserve(n[0] * n[1] * n[2]);
    for (std::size_t i = 0; i < n[0]; ++i) {
        // min + k*step can overshoot max by rounding noise at the last index
        const double tb = std::min(space.t_beam.min + static_cast<double>(i) * space.t_beam.step, space.t_beam.max);
        for (std::size_t j = 0; j < n[1]; ++j) {
            const double tc =
                std::min(space.t_cross.min + static_cast<double>(j) * space.t_cross.step, space.t_cross.max);
            for (std::size_t k = 0; k < n[2]; ++k) {
                const double sp =
                    std::min(space.spacing.min + static_cast<double>(k) * space.spacing.step, space.spacing.max);
                DesignPoint p{tb, tc, sp};
                validate_design(p);
                grid.push_back(p);
            }
        }
    }
    return grid;
}

ScalerParams::ScalerParams(std::vector<double> mins, std::vector<double> maxs)
    : mins_(std::move(mins)), maxs_(std::move(maxs)) {
    if (mins_.size() != maxs_.size())
        throw ValidationError("scaler min/max column counts differ");
    for (std::size_t c = 0; c < mins_.size(); ++c) {
        if (!std::isfinite(mins_[c]) || !std::isfinite(maxs_[c]) || !(maxs_[c] > mins_[c]))
            throw ValidationError("scaler column " + std::to_string(c) + " degenerate: max must exceed min");
    }
}

ScalerParams fit_scaler(const std::vector<std::vector<double>>& rows) {
    if (rows.size() < 2)
        throw ValidationError("scaler fit needs at least 2 rows, got " + std::to_string(rows.size()));
    const std::size_t cols = rows.front().size();
    std::vector<double> mins(cols, std::numeric_limits<double>::infinity());
    std::vector<double> maxs(cols, -std::numeric_limits<double>::infinity());
    for (const auto& row : rows) {
        if (row.size() != cols)
            throw ValidationError("scaler fit: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!std::isfinite(row[c]))
                throw ValidationError("scaler fit: non-finite value in column " + std::to_string(c));
            mins[c] = std::min(mins[c], row[c]);
            maxs[c] = std::max(maxs[c], row[c]);
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        if (!(maxs[c] > mins[c]))
            throw ValidationError("degenerate column " + std::to_string(c) + ": constant value " +
                                  format_double(mins[c]));
    }
    return ScalerParams(std::move(mins), std::move(maxs));
}

double scale(double value, const ScalerParams& params, std::size_t col) {
    const double s = (value - params.min(col)) / (params.max(col) - params.min(col));
    if (s < 0.0 && s > -1e-9)
        return 0.0;
    if (s > 1.0 && s < 1.0 + 1e-9)
        return 1.0;
    return s;
}

double unscale(double value, const ScalerParams& params, std::size_t col) {
    return params.min(col) + value * (params.max(col) - params.min(col));
}

std::vector<double> scale_row(const std::vector<double>& row, const ScalerParams& params) {
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c)
        out[c] = scale(row[c], params, c);
    return out;
}

std::vector<double> unscale_row(const std::vector<double>& row, const ScalerParams& params) {
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c)
        out[c] = unscale(row[c], params, c);
    return out;
}

} // namespace finray
