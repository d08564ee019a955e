#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mejpa/gain.hpp"

namespace mejpa {

/// Optimizer search bounds for the tunable design parameters.
struct ParameterBounds {
    double z_min = 10.0, z_max = 150.0;        // Ohm
    double c_min = 0.5e-12, c_max = 20e-12;    // F
    double depth_min = 0.0, depth_max = 0.1;   // flux-quantum units
};

/// Read / write one scalar design parameter by path. Supported paths:
/// squid.c_total, squid.flux_dc, squid.l_stray, pump.delta_phi,
/// pump.f_pump, transformer.z_lambda4, transformer.z_lambda2 and
/// transformer.sections[N].z0.
double get_parameter(const DesignConfig& config, const std::string& path);
void set_parameter(DesignConfig& config, const std::string& path, double value);

/// Lower/upper optimizer bound for a parameter path.
std::pair<double, double> parameter_bounds(const std::string& path,
                                           const ParameterBounds& bounds = {});

struct SweepSummary {
    double value = 0.0;
    bool ok = false;
    double g0_db = 0.0;
    std::optional<double> bw_hz;
    std::optional<double> ripple_db;
    std::string error;  // set when ok is false
};

struct SweepResult {
    std::string path;
    std::vector<double> values;
    std::vector<std::optional<GainProfile>> profiles;
    std::vector<SweepSummary> summary;
};

struct NamedSlack {
    std::string name;
    double value = 0.0;  // >= 0 means satisfied
};

struct OptimizationReport {
    DesignConfig best_config;
    double objective_initial = 0.0;
    double objective_best = 0.0;
    int evaluations = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<NamedSlack> constraint_slacks;
    std::vector<std::string> free_params;
    std::vector<double> best_values;
};

struct ScalingPoint {
    double g0_linear = 0.0;
    double bw_hz = 0.0;
};

struct ScalingStudy {
    std::vector<ScalingPoint> points;
    double slope = 0.0;  // d log bw / d log g0
};

/// Evaluate the gain profile at each value of one design parameter.
/// With retune, the pump depth is re-solved per point so the band-center
/// gain matches target_g0_db (the band center follows the plasma
/// resonance of the modified design, or the swept pump frequency).
/// Per-value failures are recorded as gaps; the sweep continues.
SweepResult sweep_parameter(const DesignConfig& base, const std::string& path,
                            const std::vector<double>& values, bool retune,
                            double target_g0_db = 20.0, double threshold_db = 15.0);

/// Null the quadratic coefficient of the gain expansion by adjusting the
/// given free parameters, holding the band-center gain at target_g0_db
/// (pump re-solved at every candidate).
OptimizationReport flatten_gain(const DesignConfig& base,
                                const std::vector<std::string>& free_params,
                                double target_g0_db);

/// Maximize the contiguous bandwidth above g_floor_db subject to a
/// peak-to-peak ripple cap, holding the band-center gain at the base
/// design's center gain.
OptimizationReport maximize_bandwidth(const DesignConfig& base,
                                      const std::vector<std::string>& free_params,
                                      double g_floor_db, double ripple_cap_db);

/// Retune the pump over a list of center-gain targets and fit the
/// log-log slope of half-power bandwidth versus linear center gain.
ScalingStudy gbw_scaling_study(const DesignConfig& config,
                               const std::vector<double>& g0_list_db);

}  // namespace mejpa
