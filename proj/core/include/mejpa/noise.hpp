#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mejpa/constants.hpp"

namespace mejpa {

/// Complete system/amplifier noise decomposition in kelvin.
struct NoiseBudget {
    double t_in = 0.0;       // input (vacuum) noise temperature, K
    double t_hemt = 0.0;     // following-amplifier noise, K
    double g_jpa = 1.0;      // preamplifier linear power gain
    double dsnr = 1.0;       // SNR improvement pump on/off, linear
    double t_sys = 0.0;      // system noise referred to the input, K
    double t_jpa = 0.0;      // preamplifier added noise, K
    double t_quantum = 0.0;  // half-photon reference at the analysis frequency, K
    bool sub_vacuum = false; // t_jpa came out negative (flagged, not clipped)
};

/// Hot/cold load measurement for Y-factor calibration. Powers may be in
/// any common linear unit; only the ratio enters.
struct YFactorInputs {
    double t_hot = 0.0;
    double t_cold = 0.0;
    double p_hot = 0.0;
    double p_cold = 0.0;

    void validate() const;
};

struct TracePoint {
    double freq_hz = 0.0;
    double power_dbm = 0.0;
};

/// Receiver noise temperature from a hot/cold load measurement:
/// (t_hot - Y t_cold) / (Y - 1) with Y = p_hot / p_cold.
double y_factor_hemt(const YFactorInputs& inputs);

/// Half-photon vacuum noise temperature h f / (2 k_B).
double quantum_limit_temperature(double f_hz, const PhysicalConstants& constants = {});

/// Callen-Welton effective temperature of a load at physical temperature
/// t_phys: (h f / 2 k_B) coth(h f / (2 k_B t_phys)).
double callen_welton_temperature(double f_hz, double t_phys,
                                 const PhysicalConstants& constants = {});

/// Solve the coupled SNR-improvement / budget-identity pair in closed
/// form for the preamplifier noise. t_quantum is filled from f_hz when
/// given (pass 0 to leave it unset).
NoiseBudget t_jpa_from_dsnr(double dsnr, double g_jpa, double t_hemt, double t_in,
                            double f_hz = 0.0, const PhysicalConstants& constants = {});

/// SNR improvement between pump-on and pump-off traces. Each trace must
/// carry one tone above the noise floor; the floor is the median bin and
/// the tone the maximum bin.
double dsnr_from_traces(const std::vector<TracePoint>& on_trace,
                        const std::vector<TracePoint>& off_trace);

/// Parse a two-column (frequency_hz, power_dbm) delimited text trace.
/// '#' starts a comment; a single leading header line is tolerated.
std::vector<TracePoint> parse_trace(std::istream& in);
std::vector<TracePoint> parse_trace_file(const std::string& path);

}  // namespace mejpa
