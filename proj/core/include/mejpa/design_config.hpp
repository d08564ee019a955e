#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mejpa/constants.hpp"
#include "mejpa/junction.hpp"
#include "mejpa/network.hpp"
#include "mejpa/pump.hpp"

namespace mejpa {

/// Uniform frequency grid for profile evaluation.
struct FrequencyGrid {
    double f_start = 0.0;  // Hz
    double f_stop = 0.0;   // Hz
    int points = 0;

    void validate() const;
    std::vector<double> frequencies() const;
};

/// One complete amplifier design: device, environment, pump and the
/// analysis grid. This is the unit the gain engine, sweeps and the
/// optimizers operate on.
struct DesignConfig {
    PhysicalConstants constants;
    SquidParams squid;
    std::optional<std::pair<JunctionParams, JunctionParams>> junctions;
    EnvironmentModel transformer;
    PumpParams pump;
    std::optional<double> flux_dc_override;
    FrequencyGrid grid;

    void validate() const;

    /// SQUID with the flux override applied, if any.
    SquidParams effective_squid() const;

    /// Band center for tuning and studies: half the pump frequency when a
    /// pump is configured, otherwise the flux-biased plasma frequency.
    double band_center_hz() const;
};

}  // namespace mejpa
