#pragma once

#include <optional>

namespace mejpa {

/// Flux-pump drive settings for three-wave mixing.
struct PumpParams {
    double f_pump = 0.0;      // Hz
    double delta_phi = 0.0;   // modulation depth, units of flux quantum
    double phase = 0.0;       // rad
    std::optional<double> p_pump_dbm;  // informational on-chip power

    void validate() const;
};

/// Signal/idler pair under a pump at omega_p = omega_s + omega_i.
struct SidebandPair {
    double omega_s = 0.0;  // rad/s
    double omega_i = 0.0;  // rad/s

    static SidebandPair from_signal(double omega_s, double omega_p);
    double omega_pump() const { return omega_s + omega_i; }
};

}  // namespace mejpa
