#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "mejpa/design_config.hpp"

namespace mejpa {

/// Complex reflection amplitudes at the source plane for one signal
/// frequency: g_s at omega_s, and the idler output wave at
/// omega_i = omega_p - omega_s per unit signal input.
struct SidebandGain {
    cplx g_s{0.0, 0.0};
    cplx g_i{0.0, 0.0};
};

/// Reflection-gain profile over a frequency grid plus fitted metrics.
struct GainProfile {
    std::vector<double> freqs;          // Hz
    std::vector<cplx> g_complex;        // reflection amplitude
    std::vector<double> gain_db;        // 20 log10 |g|
    double g0 = 1.0;                    // fitted linear power gain at center
    double g2 = 0.0;                    // per (rad/s)^2
    double g4 = 0.0;                    // per (rad/s)^4
    double kappa0 = 0.0;                // unpumped linewidth, rad/s
    double threshold_db = 15.0;         // level defining bw_at_threshold
    std::optional<double> bw_at_threshold;  // contiguous band around center, Hz
    std::optional<double> ripple_db;        // max - min gain over that band
};

/// Node-equation denominator D(w) = -w^2 C + Gamma0 + i w Y_env(w).
cplx sideband_denominator(double omega, const SquidParams& squid,
                          const ModulationCoefficients& mods,
                          const EnvironmentModel& env);

/// Pump depth at which the degenerate-point gain diverges for this
/// design (evaluated at omega_c = omega_p / 2).
double critical_pump_depth(const DesignConfig& config);

/// Solve the two-sideband system for one signal frequency.
/// Throws ThresholdError above the parametric-oscillation threshold.
SidebandGain reflection_gain(const SidebandPair& pair, const SquidParams& squid,
                             const PumpParams& pump, const EnvironmentModel& env,
                             const PhysicalConstants& constants = {});

/// Amplitude gain in dB at one frequency (helper around reflection_gain).
double gain_db_at(const DesignConfig& config, double f_hz);

/// Evaluate the reflection gain over a grid and extract profile metrics:
/// even-polynomial expansion of the linear power gain about the band
/// center, unpumped linewidth, bandwidth above threshold_db and ripple.
GainProfile gain_profile(const DesignConfig& config, const std::vector<double>& freqs_hz,
                         double threshold_db = 15.0);

GainProfile gain_profile(const DesignConfig& config, double threshold_db = 15.0);

/// Find the pump depth that puts the band-center gain at target_g0_db
/// (pump frequency fixed at 2 f_center). Bracketed root finding below
/// the oscillation threshold; throws DomainError when the target exceeds
/// the maximum attainable gain.
PumpParams pump_operating_point(const DesignConfig& config, double target_g0_db,
                                double f_center_hz);

/// Unpumped resonance linewidth (rad/s): full width at half maximum of
/// the reflection group delay around f_center.
double unpumped_linewidth(const DesignConfig& config, double f_center_hz);

/// Contiguous bandwidth around the band center where gain_db stays at or
/// above level_db; edges interpolated linearly. Returns nullopt when the
/// center itself is below the level.
std::optional<double> bandwidth_above(const std::vector<double>& freqs_hz,
                                      const std::vector<double>& gain_db,
                                      double f_center_hz, double level_db);

}  // namespace mejpa
