#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace finray {

// Hard bounds of the three design variables (mm). Front and support beams share
// one thickness by construction.
inline constexpr double kTBeamMin = 1.5;
inline constexpr double kTBeamMax = 4.0;
inline constexpr double kTCrossMin = 0.8;
inline constexpr double kTCrossMax = 1.6;
inline constexpr double kSpacingMin = 10.0;
inline constexpr double kSpacingMax = 16.0;

// One Fin-Ray internal geometry, all lengths in mm.
struct DesignPoint {
    double t_beam = kTBeamMin;   // thickness of front and support beams (equal)
    double t_cross = kTCrossMin; // crossbeam thickness
    double spacing = kSpacingMin; // equal spacing between crossbeams

    bool operator==(const DesignPoint&) const = default;
};

// Throws ValidationError naming the offending field if p is non-finite,
// non-positive, or outside the hard bounds.
void validate_design(const DesignPoint& p);

struct VarRange {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;
};

// Axis-aligned grid over the three design variables.
struct DesignSpace {
    VarRange t_beam;
    VarRange t_cross;
    VarRange spacing;

    // (1.5-4.0 step 0.5) x (0.8-1.6 step 0.2) x (10-16 step 2): 6x5x4 = 120 points.
    static DesignSpace default_space();
};

// Throws ValidationError naming the variable whose range is inverted, whose step
// does not evenly divide the range (1e-9 mm tolerance), or which leaves the
// hard bounds.
void validate_space(const DesignSpace& space);

// Grid points per variable, in (t_beam, t_cross, spacing) order.
std::array<std::size_t, 3> grid_counts(const DesignSpace& space);

// Full factorial grid in lexicographic order: t_beam outermost, spacing
// innermost. Length equals the product of grid_counts.
std::vector<DesignPoint> enumerate_grid(const DesignSpace& space);

// Per-column min-max bounds used for normalization and its inverse.
class ScalerParams {
public:
    ScalerParams() = default;
    ScalerParams(std::vector<double> mins, std::vector<double> maxs);

    std::size_t columns() const { return mins_.size(); }
    double min(std::size_t col) const { return mins_[col]; }
    double max(std::size_t col) const { return maxs_[col]; }

private:
    std::vector<double> mins_;
    std::vector<double> maxs_;
};

// Exact per-column min/max of `rows` (all rows the same width, >= 2 rows).
// A constant column is degenerate: ValidationError identifying the column index.
ScalerParams fit_scaler(const std::vector<std::vector<double>>& rows);

// (v - min) / (max - min). Results within 1e-9 of [0,1] are clamped to the
// boundary; larger excursions are returned as-is so callers can flag them.
double scale(double value, const ScalerParams& params, std::size_t col);

// Inverse of scale. Inputs outside [0,1] are permitted (extrapolation).
double unscale(double value, const ScalerParams& params, std::size_t col);

std::vector<double> scale_row(const std::vector<double>& row, const ScalerParams& params);
std::vector<double> unscale_row(const std::vector<double>& row, const ScalerParams& params);

} // namespace finray
