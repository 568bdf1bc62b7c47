#include "finray/oracle.hpp"

#include <cmath>

#include "finray/errors.hpp"
#include "finray/rng.hpp"
#include "finray/text.hpp"

namespace finray {

void validate_oracle_config(const OracleConfig& config) {
    if (!std::isfinite(config.noise_sigma) || config.noise_sigma < 0.0)
        throw ValidationError("oracle noise_sigma must be >= 0, got " + format_double(config.noise_sigma));
}

Responses oracle_evaluate(const DesignPoint& design, const OracleConfig& config, std::uint64_t record_index) {
    validate_oracle_config(config);
    validate_design(design);

    const double u = (design.t_beam - kTBeamMin) / (kTBeamMax - kTBeamMin);
    const double v = (design.t_cross - kTCrossMin) / (kTCrossMax - kTCrossMin);
    const double w = (design.spacing - kSpacingMin) / (kSpacingMax - kSpacingMin);

    Responses r;
    r.fx = 4.0 + 48.0 * u + 18.0 * u * u + 8.0 * u * v + 4.0 * v - 5.0 * u * w;
    r.fy = 0.25 * r.fx + 2.0 * v;
    r.dx = 33.0 - 12.0 * u - 4.0 * u * u - 2.0 * v + 2.0 * w;
    r.dy = 9.0 - 4.0 * u - v + w;

    if (config.noise_sigma > 0.0) {
        double* out[4] = {&r.fx, &r.fy, &r.dx, &r.dy};
        for (std::uint64_t j = 0; j < 4; ++j) {
            Rng stream(Rng::mix(Rng::mix(config.seed, record_index), j));
            *out[j] *= 1.0 + config.noise_sigma * stream.normal();
        }
    }
    return r;
}

Dataset generate_dataset(const DesignSpace& space, const OracleConfig& config) {
    validate_oracle_config(config);
    const auto grid = enumerate_grid(space);
    Dataset ds(Provenance::OracleGenerated, config.seed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Responses r = oracle_evaluate(grid[i], config, i);
        ds.add({grid[i], r.fx, r.fy, r.dx, r.dy});
    }
    return ds;
}

} // namespace finray
