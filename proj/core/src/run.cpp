#include "mejpa/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include "mejpa/design.hpp"
#include "mejpa/errors.hpp"
#include "mejpa/gain.hpp"
#include "mejpa/version.hpp"

namespace mejpa {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ResultTable base_table(const RunConfig& config, const char* command) {
    ResultTable t;
    t.set_meta("tool", "mejpa");
    t.set_meta("version", version_string);
    t.set_meta("command", command);
    t.set_meta("config_hash", config.config_hash);
    if (const char* seed = std::getenv("MEJPA_SEED")) t.set_meta("seed", seed);
    if (!config.defaults_applied.empty()) {
        std::string joined;
        for (const auto& d : config.defaults_applied) {
            if (!joined.empty()) joined += "; ";
            joined += d;
        }
        t.set_meta("defaults_applied", joined);
    }
    t.set_meta("timestamp", iso_timestamp());
    return t;
}

std::string resolve_path(const RunConfig& config, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_absolute()) return p;
    return (std::filesystem::path(config.source_dir) / path).string();
}

ResultTable run_junction(const RunConfig& config) {
    if (!config.design.junctions) {
        throw ConfigError("junction command needs a design.junction block");
    }
    const auto& [j1, j2] = *config.design.junctions;
    SquidParams squid = squid_from_junctions(j1, j2, config.design.squid.l_stray,
                                             config.design.effective_squid().flux_dc);

    ResultTable t = base_table(config, "junction");
    t.columns = {"area_um2", "r_n_ohm",   "i_c_a",   "c_j_f",
                 "i_c_total_a", "c_total_f", "l_j_h", "f_plasma_hz"};
    t.units = {"um^2", "Ohm", "A", "F", "A", "F", "H", "Hz"};
    t.add_row({j1.area, j1.r_n, j1.i_c, j1.c_j, squid.i_c_total, squid.c_total,
               squid_inductance(squid, config.design.constants),
               plasma_frequency(squid, config.design.constants) / (2.0 * pi)});
    t.set_meta("flux_dc_phi0", format_number(squid.flux_dc));
    return t;
}

ResultTable run_tune(const RunConfig& config) {
    const TuneSpec spec = config.tune.value_or(TuneSpec{});
    std::vector<double> grid(spec.points);
    for (int k = 0; k < spec.points; ++k) {
        grid[k] = spec.flux_start +
                  (spec.flux_stop - spec.flux_start) * k / (spec.points - 1);
    }
    const auto curve = flux_tuning_curve(config.design.effective_squid(), grid,
                                         config.design.constants);

    ResultTable t = base_table(config, "tune");
    t.columns = {"flux_phi0", "freq_hz"};
    t.units = {"phi0", "Hz"};
    int gaps = 0;
    for (const auto& p : curve) {
        if (p.gap) {
            ++gaps;
            continue;  // divergent points are emitted as gaps
        }
        t.add_row({p.flux, p.freq_hz});
    }
    t.set_meta("gap_points", std::to_string(gaps));
    return t;
}

DesignConfig gain_ready_design(const RunConfig& config) {
    DesignConfig d = config.design;
    if (config.gain && config.gain->target_g0_db) {
        const double f_center = config.gain->f_center_hz.value_or(d.band_center_hz());
        d.pump = pump_operating_point(d, *config.gain->target_g0_db, f_center);
    }
    if (d.pump.f_pump <= 0.0) {
        throw ConfigError("gain command needs design.pump.f_pump_hz or gain.target_g0_db");
    }
    return d;
}

ResultTable run_gain(const RunConfig& config) {
    const DesignConfig d = gain_ready_design(config);
    const double threshold = config.gain ? config.gain->threshold_db : 15.0;
    const GainProfile prof = gain_profile(d, threshold);

    ResultTable t = base_table(config, "gain");
    t.columns = {"freq_hz", "gain_db", "g_real", "g_imag"};
    t.units = {"Hz", "dB", "1", "1"};
    for (std::size_t k = 0; k < prof.freqs.size(); ++k) {
        t.add_row({prof.freqs[k], prof.gain_db[k], prof.g_complex[k].real(),
                   prof.g_complex[k].imag()});
    }
    t.set_meta("f_pump_hz", format_number(d.pump.f_pump));
    t.set_meta("delta_phi", format_number(d.pump.delta_phi));
    t.set_meta("g0_fit_db", format_number(10.0 * std::log10(prof.g0)));
    t.set_meta("kappa0_rad_s", format_number(prof.kappa0));
    t.set_meta("threshold_db", format_number(threshold));
    if (prof.bw_at_threshold) {
        t.set_meta("bw_at_threshold_hz", format_number(*prof.bw_at_threshold));
    }
    if (prof.ripple_db) t.set_meta("ripple_db", format_number(*prof.ripple_db));
    return t;
}

const char* path_unit(const std::string& path) {
    if (path == "squid.c_total") return "F";
    if (path == "squid.flux_dc") return "phi0";
    if (path == "squid.l_stray") return "H";
    if (path == "pump.delta_phi") return "phi0";
    if (path == "pump.f_pump") return "Hz";
    return "Ohm";
}

ResultTable run_sweep(const RunConfig& config) {
    if (!config.sweep) throw ConfigError("sweep command needs a sweep block");
    const SweepSpec& spec = *config.sweep;
    const SweepResult result =
        sweep_parameter(config.design, spec.path, spec.values, spec.retune,
                        spec.target_g0_db, spec.threshold_db);

    ResultTable t = base_table(config, "sweep");
    t.columns = {"value", "ok", "g0_db", "bw_hz", "ripple_db"};
    t.units = {path_unit(spec.path), "bool", "dB", "Hz", "dB"};
    for (const auto& row : result.summary) {
        t.add_row({row.value, row.ok ? 1.0 : 0.0, row.ok ? row.g0_db : nan_value,
                   row.bw_hz.value_or(nan_value), row.ripple_db.value_or(nan_value)});
        if (!row.ok) {
            std::cerr << "sweep: " << spec.path << " = " << row.value
                      << " skipped: " << row.error << "\n";
        }
    }
    t.set_meta("path", spec.path);
    t.set_meta("retune", spec.retune ? "true" : "false");
    t.set_meta("threshold_db", format_number(spec.threshold_db));
    return t;
}

ResultTable run_optimize(const RunConfig& config) {
    if (!config.optimize) throw ConfigError("optimize command needs an optimize block");
    const OptimizeSpec& spec = *config.optimize;

    OptimizationReport report;
    const char* objective_unit = "";
    if (spec.mode == "flatten") {
        report = flatten_gain(config.design, spec.free_params, spec.target_g0_db);
        objective_unit = "1/(rad/s)^2";
    } else {
        const double cap =
            spec.ripple_cap_db.value_or(std::numeric_limits<double>::infinity());
        report = maximize_bandwidth(config.design, spec.free_params, spec.g_floor_db, cap);
        objective_unit = "Hz";
    }

    ResultTable t = base_table(config, "optimize");
    t.columns = {"converged", "iterations", "evaluations", "objective_initial",
                 "objective_best"};
    t.units = {"bool", "1", "1", objective_unit, objective_unit};
    std::vector<double> row = {report.converged ? 1.0 : 0.0,
                               static_cast<double>(report.iterations),
                               static_cast<double>(report.evaluations),
                               report.objective_initial, report.objective_best};
    for (std::size_t i = 0; i < report.free_params.size(); ++i) {
        t.columns.push_back(report.free_params[i]);
        t.units.push_back(path_unit(report.free_params[i]));
        row.push_back(report.best_values[i]);
    }
    t.add_row(std::move(row));
    t.set_meta("mode", spec.mode);
    for (const auto& slack : report.constraint_slacks) {
        t.set_meta("slack_" + slack.name, format_number(slack.value));
    }
    return t;
}

ResultTable run_noise(const RunConfig& config) {
    if (!config.noise) throw ConfigError("noise command needs a noise block");
    const NoiseSpec& spec = *config.noise;

    double dsnr;
    if (spec.trace_on && spec.trace_off) {
        const auto on = parse_trace_file(resolve_path(config, *spec.trace_on));
        const auto off = parse_trace_file(resolve_path(config, *spec.trace_off));
        dsnr = dsnr_from_traces(on, off);
    } else if (spec.dsnr_linear) {
        dsnr = *spec.dsnr_linear;
    } else if (spec.dsnr_db) {
        dsnr = std::pow(10.0, *spec.dsnr_db / 10.0);
    } else {
        throw ConfigError("noise block needs dsnr_linear, dsnr_db or trace_on/trace_off");
    }

    double g_jpa;
    if (spec.g_jpa_linear) {
        g_jpa = *spec.g_jpa_linear;
    } else if (spec.g_jpa_db) {
        g_jpa = std::pow(10.0, *spec.g_jpa_db / 10.0);
    } else {
        throw ConfigError("noise block needs g_jpa_linear or g_jpa_db");
    }

    double t_hemt;
    if (spec.t_hemt_k) {
        t_hemt = *spec.t_hemt_k;
    } else if (spec.y_factor) {
        t_hemt = y_factor_hemt(*spec.y_factor);
    } else {
        throw ConfigError("noise block needs t_hemt_k or y_factor");
    }

    double t_in;
    if (spec.t_in_k) {
        t_in = *spec.t_in_k;
    } else if (spec.f_hz > 0.0) {
        t_in = quantum_limit_temperature(spec.f_hz, config.design.constants);
    } else {
        throw ConfigError("noise block needs t_in_k or f_hz (vacuum default)");
    }

    const NoiseBudget budget = t_jpa_from_dsnr(dsnr, g_jpa, t_hemt, t_in, spec.f_hz,
                                               config.design.constants);

    ResultTable t = base_table(config, "noise");
    t.columns = {"t_in_k", "t_hemt_k", "g_jpa", "dsnr", "t_jpa_k", "t_sys_k",
                 "t_quantum_k", "sub_vacuum"};
    t.units = {"K", "K", "1", "1", "K", "K", "K", "bool"};
    t.add_row({budget.t_in, budget.t_hemt, budget.g_jpa, budget.dsnr, budget.t_jpa,
               budget.t_sys, budget.t_quantum, budget.sub_vacuum ? 1.0 : 0.0});
    return t;
}

}  // namespace

std::optional<Command> command_from_string(const std::string& name) {
    if (name == "junction") return Command::junction;
    if (name == "tune") return Command::tune;
    if (name == "gain") return Command::gain;
    if (name == "sweep") return Command::sweep;
    if (name == "optimize") return Command::optimize;
    if (name == "noise") return Command::noise;
    return std::nullopt;
}

int run_command(Command cmd, const RunConfig& config, const std::string& out_path,
                std::optional<TableFormat> format_override,
                std::optional<int> grid_points_override) {
    try {
        RunConfig cfg = config;
        if (grid_points_override) {
            if (*grid_points_override < 2) {
                throw ConfigError("--grid-points must be at least 2");
            }
            cfg.design.grid.points = *grid_points_override;
        }

        ResultTable table;
        switch (cmd) {
            case Command::junction: table = run_junction(cfg); break;
            case Command::tune: table = run_tune(cfg); break;
            case Command::gain: table = run_gain(cfg); break;
            case Command::sweep: table = run_sweep(cfg); break;
            case Command::optimize: table = run_optimize(cfg); break;
            case Command::noise: table = run_noise(cfg); break;
        }

        const TableFormat format = format_override.value_or(cfg.format);
        if (out_path.empty() || out_path == "-") {
            write_table(table, std::cout, format);
        } else {
            write_table_file(table, out_path, format);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace mejpa
