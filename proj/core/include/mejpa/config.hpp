#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mejpa/design_config.hpp"
#include "mejpa/noise.hpp"
#include "mejpa/result_table.hpp"

namespace mejpa {

struct TuneSpec {
    double flux_start = 0.0;
    double flux_stop = 0.5;
    int points = 251;
};

/// Optional pump auto-tune for the gain command.
struct GainSpec {
    std::optional<double> target_g0_db;
    std::optional<double> f_center_hz;
    double threshold_db = 15.0;
};

struct SweepSpec {
    std::string path;
    std::vector<double> values;
    bool retune = false;
    double target_g0_db = 20.0;
    double threshold_db = 15.0;
};

struct OptimizeSpec {
    std::string mode;  // "flatten" or "max_bandwidth"
    std::vector<std::string> free_params;
    double target_g0_db = 20.0;
    double g_floor_db = 15.0;
    std::optional<double> ripple_cap_db;
};

struct NoiseSpec {
    std::optional<double> dsnr_linear;
    std::optional<double> dsnr_db;
    std::optional<std::string> trace_on;
    std::optional<std::string> trace_off;
    std::optional<double> g_jpa_linear;
    std::optional<double> g_jpa_db;
    std::optional<double> t_hemt_k;
    std::optional<YFactorInputs> y_factor;
    std::optional<double> t_in_k;
    double f_hz = 0.0;  // analysis frequency (quantum limit; default t_in)
};

/// Fully validated run configuration: the design plus per-command blocks.
struct RunConfig {
    DesignConfig design;
    std::optional<TuneSpec> tune;
    std::optional<GainSpec> gain;
    std::optional<SweepSpec> sweep;
    std::optional<OptimizeSpec> optimize;
    std::optional<NoiseSpec> noise;
    TableFormat format = TableFormat::csv;

    std::string config_hash;                 // FNV-1a of the raw file bytes
    std::vector<std::string> defaults_applied;
    std::string source_dir;  // directory of the config file (trace paths resolve here)
};

/// Load and validate a JSON run configuration. Unknown keys are
/// rejected; parse errors report the line, schema violations the key
/// path, invariant violations the offending type. All failures throw
/// ConfigError.
RunConfig load_config(const std::string& path);

/// Parse from a string (hash computed over the string). source_dir
/// resolves relative trace paths.
RunConfig parse_config(const std::string& text, const std::string& source_dir = ".");

}  // namespace mejpa
