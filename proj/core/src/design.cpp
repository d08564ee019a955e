#include "mejpa/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mejpa/errors.hpp"
#include "mejpa/optim.hpp"

namespace mejpa {

void FrequencyGrid::validate() const {
    if (points == 0) return;  // unset grid is allowed until a profile is requested
    if (points < 2) throw DomainError("FrequencyGrid: need at least 2 points");
    if (f_start <= 0.0 || f_stop <= f_start) {
        throw DomainError("FrequencyGrid: need 0 < f_start < f_stop");
    }
}

std::vector<double> FrequencyGrid::frequencies() const {
    validate();
    if (points == 0) throw DomainError("FrequencyGrid: grid is unset");
    std::vector<double> f(points);
    for (int k = 0; k < points; ++k) {
        f[k] = f_start + (f_stop - f_start) * k / (points - 1);
    }
    return f;
}

void DesignConfig::validate() const {
    constants.validate();
    effective_squid().validate();
    transformer.validate();
    pump.validate();
    grid.validate();
    if (junctions) {
        junctions->first.validate();
        junctions->second.validate();
    }
}

SquidParams DesignConfig::effective_squid() const {
    SquidParams s = squid;
    if (flux_dc_override) s.flux_dc = *flux_dc_override;
    return s;
}

double DesignConfig::band_center_hz() const {
    if (pump.f_pump > 0.0) return 0.5 * pump.f_pump;
    return plasma_frequency(effective_squid(), constants) / (2.0 * pi);
}

namespace {

LineSection& section_by_theta(DesignConfig& config, double theta_target,
                              const char* name) {
    auto& sections = config.transformer.sections;
    if (sections.empty()) {
        throw DomainError(std::string("parameter path ") + name +
                          ": transformer has no sections");
    }
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sections.size(); ++i) {
        const double err = std::abs(sections[i].theta_ref - theta_target);
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    return sections[best];
}

std::size_t parse_section_index(const std::string& path) {
    // transformer.sections[N].z0
    const auto lb = path.find('[');
    const auto rb = path.find(']');
    if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
        throw DomainError("unsupported parameter path: " + path);
    }
    return static_cast<std::size_t>(std::stoul(path.substr(lb + 1, rb - lb - 1)));
}

double* parameter_slot(DesignConfig& config, const std::string& path) {
    if (path == "squid.c_total") return &config.squid.c_total;
    if (path == "squid.flux_dc") return &config.squid.flux_dc;
    if (path == "squid.l_stray") return &config.squid.l_stray;
    if (path == "pump.delta_phi") return &config.pump.delta_phi;
    if (path == "pump.f_pump") return &config.pump.f_pump;
    if (path == "transformer.z_lambda4") {
        return &section_by_theta(config, pi / 2.0, "transformer.z_lambda4").z0;
    }
    if (path == "transformer.z_lambda2") {
        return &section_by_theta(config, pi, "transformer.z_lambda2").z0;
    }
    if (path.rfind("transformer.sections[", 0) == 0 &&
        path.size() > 4 && path.substr(path.size() - 3) == ".z0") {
        const std::size_t idx = parse_section_index(path);
        if (idx >= config.transformer.sections.size()) {
            throw DomainError("parameter path out of range: " + path);
        }
        return &config.transformer.sections[idx].z0;
    }
    throw DomainError("unsupported parameter path: " + path);
}

}  // namespace

double get_parameter(const DesignConfig& config, const std::string& path) {
    DesignConfig copy = config;
    return *parameter_slot(copy, path);
}

void set_parameter(DesignConfig& config, const std::string& path, double value) {
    *parameter_slot(config, path) = value;
}

std::pair<double, double> parameter_bounds(const std::string& path,
                                           const ParameterBounds& b) {
    if (path == "squid.c_total") return {b.c_min, b.c_max};
    if (path == "pump.delta_phi") return {b.depth_min, b.depth_max};
    if (path == "squid.flux_dc") return {0.0, 0.499};
    if (path == "squid.l_stray") return {0.0, 1e-9};
    if (path == "pump.f_pump") return {1e9, 40e9};
    // all remaining supported paths are section impedances
    return {b.z_min, b.z_max};
}

namespace {

// Analysis grid recentered on f_center, keeping the base span and count.
std::vector<double> recentered_grid(const DesignConfig& base, double f_center) {
    FrequencyGrid g = base.grid;
    const double span = g.f_stop - g.f_start;
    g.f_start = f_center - span / 2.0;
    g.f_stop = f_center + span / 2.0;
    if (g.f_start <= 0.0) {
        g.f_stop -= g.f_start - 1e6;
        g.f_start = 1e6;
    }
    // keep strictly inside (0, f_pump); the pump sits at 2 f_center
    const double f_max = 2.0 * f_center * (1.0 - 1e-9);
    if (g.f_stop >= f_max) g.f_stop = f_max;
    return g.frequencies();
}

double center_gain_db(const DesignConfig& config, double f_center) {
    return gain_db_at(config, f_center);
}

}  // namespace

SweepResult sweep_parameter(const DesignConfig& base, const std::string& path,
                            const std::vector<double>& values, bool retune,
                            double target_g0_db, double threshold_db) {
    base.validate();
    if (values.empty()) throw DomainError("sweep_parameter: empty value list");
    get_parameter(base, path);  // validates the path up front

    // retuning a swept pump depth would overwrite the swept value
    const bool do_retune = retune && path != "pump.delta_phi";

    SweepResult result;
    result.path = path;
    result.values = values;
    result.profiles.resize(values.size());
    result.summary.resize(values.size());

    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepSummary& row = result.summary[i];
        row.value = values[i];
        try {
            DesignConfig cfg = base;
            set_parameter(cfg, path, values[i]);
            cfg.validate();

            double f_center;
            if (path == "pump.f_pump") {
                f_center = values[i] / 2.0;
            } else if (do_retune) {
                f_center = plasma_frequency(cfg.effective_squid(), cfg.constants) /
                           (2.0 * pi);
            } else {
                f_center = cfg.band_center_hz();
            }
            if (do_retune) {
                cfg.pump = pump_operating_point(cfg, target_g0_db, f_center);
            }
            const auto grid = recentered_grid(cfg, f_center);
            GainProfile prof = gain_profile(cfg, grid, threshold_db);
            row.ok = true;
            row.g0_db = 10.0 * std::log10(prof.g0);
            row.bw_hz = prof.bw_at_threshold;
            row.ripple_db = prof.ripple_db;
            result.profiles[i] = std::move(prof);
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
        }
    }
    return result;
}

namespace {

struct TunedEvaluation {
    DesignConfig config;
    GainProfile profile;
};

// Apply free-parameter values, re-solve the pump for the gain target and
// evaluate the profile on a grid centered at f_center.
TunedEvaluation evaluate_candidate(const DesignConfig& base,
                                   const std::vector<std::string>& params,
                                   const std::vector<double>& x, double target_g0_db,
                                   double f_center, double threshold_db) {
    DesignConfig cfg = base;
    for (std::size_t i = 0; i < params.size(); ++i) {
        set_parameter(cfg, params[i], x[i]);
    }
    cfg.validate();
    cfg.pump = pump_operating_point(cfg, target_g0_db, f_center);
    const auto grid = recentered_grid(cfg, f_center);
    return {cfg, gain_profile(cfg, grid, threshold_db)};
}

void check_free_params(const DesignConfig& base, const std::vector<std::string>& params) {
    if (params.empty()) throw DomainError("optimizer: need at least one free parameter");
    for (const auto& p : params) get_parameter(base, p);
}

MinimizeResult run_minimizer(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<std::string>& params,
                             const std::vector<double>& x0) {
    if (params.size() == 1) {
        const auto [lo, hi] = parameter_bounds(params[0]);
        auto f1 = [&](double x) { return f({x}); };
        return golden_section_minimize(f1, lo, hi, 1e-6, 200);
    }
    std::vector<double> step(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto [lo, hi] = parameter_bounds(params[i]);
        step[i] = 0.1 * (hi - lo);
    }
    return nelder_mead_minimize(f, x0, step, 1e-4, 500);
}

bool within_bounds(const std::vector<std::string>& params, const std::vector<double>& x) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto [lo, hi] = parameter_bounds(params[i]);
        if (x[i] < lo || x[i] > hi) return false;
    }
    return true;
}

}  // namespace

OptimizationReport flatten_gain(const DesignConfig& base,
                                const std::vector<std::string>& free_params,
                                double target_g0_db) {
    base.validate();
    check_free_params(base, free_params);
    const double f_center = base.band_center_hz();

    auto objective = [&](const std::vector<double>& x) -> double {
        if (!within_bounds(free_params, x)) {
            return std::numeric_limits<double>::infinity();
        }
        try {
            const auto eval = evaluate_candidate(base, free_params, x, target_g0_db,
                                                 f_center, 15.0);
            return std::abs(eval.profile.g2);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    std::vector<double> x0(free_params.size());
    for (std::size_t i = 0; i < free_params.size(); ++i) {
        x0[i] = get_parameter(base, free_params[i]);
    }
    const double initial = objective(x0);
    if (!std::isfinite(initial)) {
        throw DomainError("flatten_gain: base design is infeasible at the gain target");
    }

    MinimizeResult found = run_minimizer(objective, free_params, x0);

    // never accept a candidate worse than the start
    if (found.fx > initial) {
        found.x = x0;
        found.fx = initial;
    }

    const auto best = evaluate_candidate(base, free_params, found.x, target_g0_db,
                                         f_center, 15.0);
    OptimizationReport report;
    report.best_config = best.config;
    report.objective_initial = initial;
    report.objective_best = std::abs(best.profile.g2);
    report.evaluations = found.evaluations;
    report.iterations = found.iterations;
    report.converged = found.converged;
    report.free_params = free_params;
    report.best_values = found.x;
    const double center_db = center_gain_db(best.config, f_center);
    report.constraint_slacks.push_back(
        {"center_gain_within_0.5_db", 0.5 - std::abs(center_db - target_g0_db)});
    return report;
}

OptimizationReport maximize_bandwidth(const DesignConfig& base,
                                      const std::vector<std::string>& free_params,
                                      double g_floor_db, double ripple_cap_db) {
    base.validate();
    check_free_params(base, free_params);
    if (base.pump.f_pump <= 0.0) {
        throw DomainError("maximize_bandwidth: base design has no pump frequency");
    }
    const double f_center = base.band_center_hz();

    const double held_center_db = center_gain_db(base, f_center);
    if (held_center_db < g_floor_db) {
        std::ostringstream msg;
        msg << "maximize_bandwidth: infeasible start, center gain " << held_center_db
            << " dB is below the floor " << g_floor_db << " dB";
        throw DomainError(msg.str());
    }

    auto bw_of = [&](const GainProfile& prof) -> double {
        const double f_c = f_center;
        const auto bw = bandwidth_above(prof.freqs, prof.gain_db, f_c, g_floor_db);
        if (!bw) return -1.0;
        if (prof.ripple_db && *prof.ripple_db > ripple_cap_db) return -1.0;
        return *bw;
    };

    auto objective = [&](const std::vector<double>& x) -> double {
        if (!within_bounds(free_params, x)) {
            return std::numeric_limits<double>::infinity();
        }
        try {
            const auto eval = evaluate_candidate(base, free_params, x, held_center_db,
                                                 f_center, g_floor_db);
            const double bw = bw_of(eval.profile);
            if (bw <= 0.0) return std::numeric_limits<double>::infinity();
            return -bw;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    std::vector<double> x0(free_params.size());
    for (std::size_t i = 0; i < free_params.size(); ++i) {
        x0[i] = get_parameter(base, free_params[i]);
    }
    const double initial = objective(x0);
    if (!std::isfinite(initial)) {
        throw DomainError("maximize_bandwidth: infeasible start (bandwidth or ripple "
                          "constraint violated at the base design)");
    }

    MinimizeResult found = run_minimizer(objective, free_params, x0);
    if (found.fx > initial) {
        found.x = x0;
        found.fx = initial;
    }

    const auto best = evaluate_candidate(base, free_params, found.x, held_center_db,
                                         f_center, g_floor_db);
    OptimizationReport report;
    report.best_config = best.config;
    report.objective_initial = -initial;
    report.objective_best = bw_of(best.profile);
    report.evaluations = found.evaluations;
    report.iterations = found.iterations;
    report.converged = found.converged;
    report.free_params = free_params;
    report.best_values = found.x;
    report.constraint_slacks.push_back(
        {"gain_floor", center_gain_db(best.config, f_center) - g_floor_db});
    if (best.profile.ripple_db) {
        report.constraint_slacks.push_back(
            {"ripple_cap", ripple_cap_db - *best.profile.ripple_db});
    }
    return report;
}

ScalingStudy gbw_scaling_study(const DesignConfig& config,
                               const std::vector<double>& g0_list_db) {
    config.validate();
    std::vector<double> distinct = g0_list_db;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) {
        throw DomainError("gbw_scaling_study: need at least two distinct gain targets");
    }
    const double f_center = config.band_center_hz();
    const double half_power_db = 10.0 * std::log10(2.0);

    ScalingStudy study;
    for (double target : g0_list_db) {
        DesignConfig cfg = config;
        cfg.pump = pump_operating_point(cfg, target, f_center);
        const auto grid = recentered_grid(cfg, f_center);
        const GainProfile prof = gain_profile(cfg, grid, target - half_power_db);
        const double g_center_db = center_gain_db(cfg, f_center);
        const auto bw = bandwidth_above(prof.freqs, prof.gain_db, f_center,
                                        g_center_db - half_power_db);
        if (!bw) {
            throw FitError("gbw_scaling_study: half-power band not resolved on the grid");
        }
        study.points.push_back({std::pow(10.0, g_center_db / 10.0), *bw});
    }

    double sx = 0.0, sy = 0.0;
    for (const auto& p : study.points) {
        sx += std::log(p.g0_linear);
        sy += std::log(p.bw_hz);
    }
    const double n = static_cast<double>(study.points.size());
    const double mx = sx / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (const auto& p : study.points) {
        const double dx = std::log(p.g0_linear) - mx;
        num += dx * (std::log(p.bw_hz) - my);
        den += dx * dx;
    }
    if (den == 0.0) throw DomainError("gbw_scaling_study: degenerate gain targets");
    study.slope = num / den;
    return study;
}

}  // namespace mejpa
