#pragma once

#include <complex>
#include <vector>

#include "mejpa/constants.hpp"

namespace mejpa {

/// Flux bias closer to the half-quantum point than this (measured as
/// |cos(pi*flux)|) raises a ValidityError instead of returning a huge
/// Josephson inductance.
inline constexpr double cos_floor = 1e-3;

/// Wafer-level process densities. Either j_c or ra_product determines the
/// critical current of a junction of given area; when both are given they
/// must agree through the Ambegaokar-Baratoff relation.
struct FabProcess {
    double j_c = 0.0;         // critical current density, A/um^2
    double c_per_area = 0.0;  // junction self-capacitance density, F/um^2
    double ra_product = 0.0;  // resistance-area product, Ohm*um^2 (0 = unset)

    /// Consistency tolerance between the j_c and ra_product routes.
    static constexpr double route_tolerance = 0.05;

    void validate(const PhysicalConstants& constants = {}) const;
};

struct JunctionParams {
    double area = 0.0;  // um^2
    double r_n = 0.0;   // normal-state resistance, Ohm (0 = unset)
    double i_c = 0.0;   // critical current, A
    double c_j = 0.0;   // self-capacitance, F

    void validate() const;
};

struct SquidParams {
    double i_c_total = 0.0;  // sum of both junction critical currents, A
    double c_total = 0.0;    // C_J1 + C_J2, F
    double l_stray = 0.0;    // stray inductance to ground, H
    double flux_dc = 0.0;    // DC flux bias in units of the flux quantum

    void validate() const;
};

/// First-order Fourier expansion of the pumped inverse inductance of the
/// series L_J(flux) + L_stray branch: 1/L(t) = gamma0 + 2 Re[gamma1 e^{i w_p t}].
struct ModulationCoefficients {
    double gamma0 = 0.0;                 // 1/H
    std::complex<double> gamma1 = 0.0;   // 1/H

    void validate() const;
};

struct TuningPoint {
    double flux = 0.0;     // units of flux quantum
    double freq_hz = 0.0;  // NaN when the point falls in the divergence gap
    bool gap = false;
};

/// Ambegaokar-Baratoff critical current pi*Delta/(2 e R_n).
double ab_critical_current(double r_n, const PhysicalConstants& constants = {});

/// Build junction parameters of a given area from process densities.
/// Uses j_c directly when set, otherwise the RA route through
/// ab_critical_current; when both are available they must agree within
/// FabProcess::route_tolerance.
JunctionParams junction_from_fab(double area, const FabProcess& fab,
                                 const PhysicalConstants& constants = {});

/// Combine two junctions into a SQUID (currents and capacitances add).
SquidParams squid_from_junctions(const JunctionParams& j1, const JunctionParams& j2,
                                 double l_stray = 0.0, double flux_dc = 0.0);

/// Flux-biased Josephson inductance Phi0 / (2 pi I_c |cos(pi flux)|).
double squid_inductance(const SquidParams& squid, const PhysicalConstants& constants = {});

/// Plasma (resonant) frequency 1/sqrt(C (L_J(flux) + L_stray)) in rad/s.
double plasma_frequency(const SquidParams& squid, const PhysicalConstants& constants = {});

/// Resonant frequency versus flux bias. Points inside the divergence band
/// are emitted as gaps rather than aborting the scan.
std::vector<TuningPoint> flux_tuning_curve(const SquidParams& squid,
                                           const std::vector<double>& flux_grid,
                                           const PhysicalConstants& constants = {});

/// First-order modulation coefficients for a flux pump of depth
/// delta_phi (units of flux quantum) around the DC bias point.
ModulationCoefficients pump_modulation_coefficients(const SquidParams& squid,
                                                    double delta_phi,
                                                    const PhysicalConstants& constants = {});

}  // namespace mejpa
