#pragma once

#include <array>
#include <cstdint>

#include "finray/dataset.hpp"
#include "finray/design_space.hpp"

namespace finray {

// Deterministic analytic stand-in for the FEM simulations. Maps any in-bounds
// design to the four responses, optionally perturbed by seeded multiplicative
// noise so dataset-quality experiments stay reproducible.
struct OracleConfig {
    double noise_sigma = 0.0; // relative std dev of the per-response noise
    std::uint64_t seed = 0;   // keys the noise stream; unused when sigma == 0
};

void validate_oracle_config(const OracleConfig& config);

// Closed-form response surface on the unit-box coordinates
//   u = (t_beam - 1.5)/2.5, v = (t_cross - 0.8)/0.8, w = (spacing - 10)/6:
//   fx = 4 + 48u + 18u^2 + 8uv + 4v - 5uw
//   fy = 0.25 fx + 2v
//   dx = 33 - 12u - 4u^2 - 2v + 2w
//   dy = 9 - 4u - v + w
// Stiffer structures push harder and deflect less, and the force/displacement
// objectives genuinely trade off over the default grid.
//
// With noise_sigma > 0 each response is multiplied by (1 + eps), eps drawn from
// a zero-mean Gaussian with std noise_sigma. The noise stream is keyed
// counter-style on (seed, record_index, response index), so evaluation order
// never changes results. Out-of-bounds designs are rejected, never extrapolated.
Responses oracle_evaluate(const DesignPoint& design, const OracleConfig& config, std::uint64_t record_index = 0);

// Evaluates every grid point in enumeration order. The dataset is tagged
// oracle-generated with the seed recorded.
Dataset generate_dataset(const DesignSpace& space, const OracleConfig& config);

} // namespace finray
