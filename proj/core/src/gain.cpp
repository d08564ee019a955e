#include "mejpa/gain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "mejpa/errors.hpp"

namespace mejpa {

namespace {

// Source-to-device transmission matrix of the full chain (identity when
// the environment has no sections).
TwoPortABCD chain_abcd(const EnvironmentModel& env, double f) {
    const auto full = env.chain();
    if (full.empty()) return {};
    return cascade(full, f);
}

// Admittance looking into the chain from the device node, derived from
// the source-to-device matrix with the source impedance terminating
// port 1: Y = (a + Z0 c) / (b + Z0 d).
cplx env_admittance(const TwoPortABCD& m, double z0) {
    return (m.a + z0 * m.c) / (m.b + z0 * m.d);
}

cplx denominator_from(const TwoPortABCD& m, double omega, double c_total,
                      double gamma0, double z0) {
    const cplx y = env_admittance(m, z0);
    return cplx{gamma0 - omega * omega * c_total, 0.0} + cplx{0.0, omega} * y;
}

// |gamma1| per unit pump depth; zero at flux extrema where the
// inverse-inductance derivative vanishes.
double gamma1_per_depth(const SquidParams& squid, const PhysicalConstants& constants) {
    constexpr double probe_depth = 1e-6;
    const ModulationCoefficients probe =
        pump_modulation_coefficients(squid, probe_depth, constants);
    return std::abs(probe.gamma1) / probe_depth;
}

double critical_depth_at(double omega_c, const SquidParams& squid,
                         const EnvironmentModel& env, const PhysicalConstants& constants) {
    const double slope = gamma1_per_depth(squid, constants);
    if (slope == 0.0) return std::numeric_limits<double>::infinity();
    const ModulationCoefficients probe = pump_modulation_coefficients(squid, 0.0, constants);
    const TwoPortABCD m_c = chain_abcd(env, omega_c / (2.0 * pi));
    const cplx d_c = denominator_from(m_c, omega_c, squid.c_total, probe.gamma0,
                                      env.source_impedance);
    return std::abs(d_c) / slope;
}

[[noreturn]] void throw_above_threshold(double delta_phi, double critical) {
    std::ostringstream msg;
    msg << "pump depth " << delta_phi << " is at or above the parametric-oscillation "
        << "threshold (critical delta_phi = " << critical << ")";
    throw ThresholdError(msg.str(), critical);
}

}  // namespace

void PumpParams::validate() const {
    if (f_pump < 0.0) throw DomainError("PumpParams: f_pump must be non-negative");
    if (delta_phi < 0.0 || delta_phi >= 0.1) {
        throw DomainError("PumpParams: delta_phi must lie in [0, 0.1)");
    }
    if (!std::isfinite(phase)) throw DomainError("PumpParams: phase must be finite");
}

SidebandPair SidebandPair::from_signal(double omega_s, double omega_p) {
    if (omega_s <= 0.0 || omega_s >= omega_p) {
        throw DomainError("SidebandPair: need 0 < omega_s < omega_p");
    }
    return {omega_s, omega_p - omega_s};
}

cplx sideband_denominator(double omega, const SquidParams& squid,
                          const ModulationCoefficients& mods,
                          const EnvironmentModel& env) {
    if (omega <= 0.0) throw DomainError("sideband_denominator: omega must be positive");
    const TwoPortABCD m = chain_abcd(env, omega / (2.0 * pi));
    return denominator_from(m, omega, squid.c_total, mods.gamma0, env.source_impedance);
}

double critical_pump_depth(const DesignConfig& config) {
    config.validate();
    if (config.pump.f_pump <= 0.0) {
        throw DomainError("critical_pump_depth: config has no pump frequency");
    }
    const double omega_c = pi * config.pump.f_pump;
    return critical_depth_at(omega_c, config.effective_squid(), config.transformer,
                             config.constants);
}

SidebandGain reflection_gain(const SidebandPair& pair, const SquidParams& squid,
                             const PumpParams& pump, const EnvironmentModel& env,
                             const PhysicalConstants& constants) {
    pump.validate();
    env.validate();
    if (pair.omega_s <= 0.0 || pair.omega_i <= 0.0) {
        throw DomainError("reflection_gain: sideband frequencies must be positive");
    }

    const double z0 = env.source_impedance;
    const double omega_s = pair.omega_s;
    const ModulationCoefficients mods =
        pump_modulation_coefficients(squid, pump.delta_phi, constants);
    const cplx gamma1 = mods.gamma1 * std::polar(1.0, pump.phase);
    const double x_s = mods.gamma0 - omega_s * omega_s * squid.c_total;

    const TwoPortABCD m_s = chain_abcd(env, omega_s / (2.0 * pi));

    SidebandGain out;
    if (pump.delta_phi == 0.0) {
        // passive reflection of the bare resonator
        const cplx y_eff = cplx{x_s, 0.0} / cplx{0.0, omega_s};
        const cplx p = m_s.a + m_s.b * y_eff;
        const cplx q = m_s.c + m_s.d * y_eff;
        out.g_s = (p - z0 * q) / (p + z0 * q);
        out.g_i = 0.0;
        return out;
    }

    // stability: the degenerate point omega_p/2 is where the pump first
    // drives the two-sideband determinant through zero
    const double omega_c = 0.5 * pair.omega_pump();
    const double critical = critical_depth_at(omega_c, squid, env, constants);
    if (pump.delta_phi >= critical) throw_above_threshold(pump.delta_phi, critical);

    const TwoPortABCD m_i = chain_abcd(env, pair.omega_i / (2.0 * pi));
    const cplx d_i_bar = std::conj(denominator_from(m_i, pair.omega_i, squid.c_total,
                                                    mods.gamma0, z0));
    const cplx d_s = denominator_from(m_s, omega_s, squid.c_total, mods.gamma0, z0);

    const double coupling2 = std::norm(gamma1);
    if (coupling2 >= std::abs(d_s * d_i_bar)) {
        throw_above_threshold(pump.delta_phi, critical);
    }

    // signal reflection from the pumpistor admittance transformed to the
    // source plane
    const cplx y_eff = (cplx{x_s, 0.0} - coupling2 / d_i_bar) / cplx{0.0, omega_s};
    const cplx p = m_s.a + m_s.b * y_eff;
    const cplx q = m_s.c + m_s.d * y_eff;
    out.g_s = (p - z0 * q) / (p + z0 * q);

    // idler wave: solve the node fluxes with unit generator voltage, then
    // propagate the idler node voltage out through the chain at omega_i
    const cplx v_g{1.0, 0.0};
    const cplx i_norton = v_g / (m_s.b + z0 * m_s.d);
    const cplx d_eff = d_s - coupling2 / d_i_bar;
    const cplx phi_s = i_norton / d_eff;
    const cplx phi_i = std::conj(-std::conj(gamma1) * phi_s / d_i_bar);
    const cplx v_i = cplx{0.0, pair.omega_i} * phi_i;
    const cplx y_i = env_admittance(m_i, z0);
    const cplx i2 = -y_i * v_i;
    const cplx v1 = m_i.a * v_i + m_i.b * i2;
    const cplx i1 = m_i.c * v_i + m_i.d * i2;
    out.g_i = (v1 - z0 * i1) / v_g;
    return out;
}

double gain_db_at(const DesignConfig& config, double f_hz) {
    const SidebandPair pair =
        SidebandPair::from_signal(2.0 * pi * f_hz, 2.0 * pi * config.pump.f_pump);
    const SidebandGain g = reflection_gain(pair, config.effective_squid(), config.pump,
                                           config.transformer, config.constants);
    return 20.0 * std::log10(std::abs(g.g_s));
}

std::optional<double> bandwidth_above(const std::vector<double>& freqs_hz,
                                      const std::vector<double>& gain_db,
                                      double f_center_hz, double level_db) {
    if (freqs_hz.size() != gain_db.size() || freqs_hz.size() < 2) return std::nullopt;
    const auto it = std::lower_bound(freqs_hz.begin(), freqs_hz.end(), f_center_hz);
    std::size_t ic = static_cast<std::size_t>(std::distance(freqs_hz.begin(), it));
    if (ic >= freqs_hz.size()) ic = freqs_hz.size() - 1;
    if (ic > 0 && std::abs(freqs_hz[ic - 1] - f_center_hz) <
                      std::abs(freqs_hz[ic] - f_center_hz)) {
        --ic;
    }
    if (gain_db[ic] < level_db) return std::nullopt;

    auto interp_edge = [&](std::size_t above, std::size_t below) {
        const double t = (gain_db[above] - level_db) / (gain_db[above] - gain_db[below]);
        return freqs_hz[above] + t * (freqs_hz[below] - freqs_hz[above]);
    };

    double f_hi = freqs_hz.back();
    for (std::size_t k = ic; k + 1 < freqs_hz.size(); ++k) {
        if (gain_db[k + 1] < level_db) {
            f_hi = interp_edge(k, k + 1);
            break;
        }
    }
    double f_lo = freqs_hz.front();
    for (std::size_t k = ic; k > 0; --k) {
        if (gain_db[k - 1] < level_db) {
            f_lo = interp_edge(k, k - 1);
            break;
        }
    }
    return f_hi - f_lo;
}

GainProfile gain_profile(const DesignConfig& config, const std::vector<double>& freqs_hz,
                         double threshold_db) {
    config.validate();
    if (config.pump.f_pump <= 0.0) {
        throw DomainError("gain_profile: config has no pump frequency");
    }
    if (freqs_hz.empty()) throw DomainError("gain_profile: empty frequency grid");
    for (double f : freqs_hz) {
        if (f <= 0.0 || f >= config.pump.f_pump) {
            throw DomainError("gain_profile: grid must lie strictly inside (0, f_pump)");
        }
    }

    const SquidParams squid = config.effective_squid();
    const double f_center = 0.5 * config.pump.f_pump;
    const double omega_p = 2.0 * pi * config.pump.f_pump;

    GainProfile prof;
    prof.threshold_db = threshold_db;
    prof.freqs = freqs_hz;
    prof.g_complex.reserve(freqs_hz.size());
    prof.gain_db.reserve(freqs_hz.size());

    if (config.pump.delta_phi > 0.0) {
        const double critical = critical_depth_at(pi * config.pump.f_pump, squid,
                                                  config.transformer, config.constants);
        if (config.pump.delta_phi >= critical) {
            throw_above_threshold(config.pump.delta_phi, critical);
        }
    }

    for (double f : freqs_hz) {
        const SidebandPair pair = SidebandPair::from_signal(2.0 * pi * f, omega_p);
        const SidebandGain g =
            reflection_gain(pair, squid, config.pump, config.transformer, config.constants);
        prof.g_complex.push_back(g.g_s);
        prof.gain_db.push_back(20.0 * std::log10(std::abs(g.g_s)));
    }

    prof.kappa0 = unpumped_linewidth(config, f_center);

    // even-polynomial fit of linear power gain about the band center,
    // window +-kappa0/2, abscissa scaled by kappa0/2 for conditioning
    const double omega_c = 2.0 * pi * f_center;
    const double half_window = prof.kappa0 / 2.0;
    std::vector<double> u, p;
    for (std::size_t k = 0; k < freqs_hz.size(); ++k) {
        const double domega = 2.0 * pi * freqs_hz[k] - omega_c;
        if (std::abs(domega) <= half_window) {
            u.push_back(domega / half_window);
            p.push_back(std::norm(prof.g_complex[k]));
        }
    }
    if (u.size() < 5) {
        throw FitError("gain_profile: fewer than 5 grid points inside the fit window");
    }
    std::array<double, 5> mom{};  // sums of u^0, u^2, u^4, u^6, u^8
    std::array<double, 3> rhs{};
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double u2 = u[k] * u[k];
        double w = 1.0;
        for (int j = 0; j < 5; ++j) {
            mom[j] += w;
            if (j < 3) rhs[j] += p[k] * w;
            w *= u2;
        }
    }
    double a[3][4] = {{mom[0], mom[1], mom[2], rhs[0]},
                      {mom[1], mom[2], mom[3], rhs[1]},
                      {mom[2], mom[3], mom[4], rhs[2]}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        if (a[col][col] == 0.0) throw FitError("gain_profile: singular fit system");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double factor = a[r][col] / a[col][col];
            for (int cc = col; cc < 4; ++cc) a[r][cc] -= factor * a[col][cc];
        }
    }
    prof.g0 = a[0][3] / a[0][0];
    prof.g2 = a[1][3] / a[1][1] / (half_window * half_window);
    prof.g4 = a[2][3] / a[2][2] / (half_window * half_window * half_window * half_window);

    prof.bw_at_threshold = bandwidth_above(freqs_hz, prof.gain_db, f_center, threshold_db);
    if (prof.bw_at_threshold) {
        double lo = f_center - 0.5 * *prof.bw_at_threshold;
        double hi = f_center + 0.5 * *prof.bw_at_threshold;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < freqs_hz.size(); ++k) {
            if (freqs_hz[k] < lo || freqs_hz[k] > hi) continue;
            gmax = std::max(gmax, prof.gain_db[k]);
            gmin = std::min(gmin, prof.gain_db[k]);
        }
        if (gmax >= gmin) prof.ripple_db = gmax - gmin;
    }
    return prof;
}

GainProfile gain_profile(const DesignConfig& config, double threshold_db) {
    return gain_profile(config, config.grid.frequencies(), threshold_db);
}

double unpumped_linewidth(const DesignConfig& config, double f_center_hz) {
    config.validate();
    if (f_center_hz <= 0.0) {
        throw DomainError("unpumped_linewidth: f_center must be positive");
    }

    const SquidParams squid = config.effective_squid();
    PumpParams off;
    off.f_pump = 0.0;
    off.delta_phi = 0.0;

    constexpr int n = 4001;
    const double f_lo = 0.5 * f_center_hz;
    const double f_hi = 1.5 * f_center_hz;
    std::vector<double> omega(n), phase(n);
    for (int k = 0; k < n; ++k) {
        const double f = f_lo + (f_hi - f_lo) * k / (n - 1);
        omega[k] = 2.0 * pi * f;
        // pump-off reflection; pair frequencies only need omega_s here
        const SidebandPair pair{2.0 * pi * f, 2.0 * pi * f};
        const SidebandGain g =
            reflection_gain(pair, squid, off, config.transformer, config.constants);
        phase[k] = std::arg(g.g_s);
    }
    // unwrap
    for (int k = 1; k < n; ++k) {
        double d = phase[k] - phase[k - 1];
        while (d > pi) d -= 2.0 * pi;
        while (d < -pi) d += 2.0 * pi;
        phase[k] = phase[k - 1] + d;
    }
    // group delay on interior points
    std::vector<double> tau(n, 0.0);
    for (int k = 1; k + 1 < n; ++k) {
        tau[k] = -(phase[k + 1] - phase[k - 1]) / (omega[k + 1] - omega[k - 1]);
    }
    tau[0] = tau[1];
    tau[n - 1] = tau[n - 2];

    int peak = 0;
    double tau_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        if (tau[k] > tau[peak]) peak = k;
        tau_min = std::min(tau_min, tau[k]);
    }
    const double height = tau[peak] - tau_min;
    if (peak <= 1 || peak >= n - 2 || height <= 10.0 * std::abs(tau_min) * 1e-9 ||
        height <= 0.0) {
        throw FitError("unpumped_linewidth: no resonance peak inside the scan window");
    }
    const double half = tau_min + 0.5 * height;

    auto cross = [&](int dir) -> double {
        for (int k = peak; k + dir >= 0 && k + dir < n; k += dir) {
            if (tau[k + dir] < half) {
                const double t = (tau[k] - half) / (tau[k] - tau[k + dir]);
                return omega[k] + t * (omega[k + dir] - omega[k]);
            }
        }
        throw FitError("unpumped_linewidth: resonance wider than the scan window");
    };
    const double w_left = cross(-1);
    const double w_right = cross(+1);
    return w_right - w_left;
}

PumpParams pump_operating_point(const DesignConfig& config, double target_g0_db,
                                double f_center_hz) {
    config.validate();
    if (target_g0_db < 0.0) {
        throw DomainError("pump_operating_point: target gain must be non-negative dB");
    }
    if (f_center_hz <= 0.0) {
        throw DomainError("pump_operating_point: f_center must be positive");
    }

    PumpParams pump;
    pump.f_pump = 2.0 * f_center_hz;
    pump.phase = config.pump.phase;
    pump.delta_phi = 0.0;
    if (target_g0_db == 0.0) return pump;

    DesignConfig cfg = config;
    cfg.pump = pump;

    const SquidParams squid = cfg.effective_squid();
    const double omega_c = 2.0 * pi * f_center_hz;
    const double critical = critical_depth_at(omega_c, squid, cfg.transformer, cfg.constants);
    const double slope = gamma1_per_depth(squid, cfg.constants);
    const double validity_cap =
        (slope > 0.0)
            ? pump_modulation_coefficients(squid, 0.0, cfg.constants).gamma0 / slope
            : std::numeric_limits<double>::infinity();
    const double hi = std::min({0.99 * critical, 0.99 * validity_cap, 0.099});
    if (!(hi > 0.0) || !std::isfinite(hi)) {
        throw DomainError("pump_operating_point: design cannot be pumped at this bias "
                          "(inverse-inductance modulation vanishes)");
    }

    auto center_gain_db = [&](double depth) {
        cfg.pump.delta_phi = depth;
        return gain_db_at(cfg, f_center_hz);
    };

    const double g_hi = center_gain_db(hi);
    if (g_hi < target_g0_db) {
        std::ostringstream msg;
        msg << "pump_operating_point: target " << target_g0_db
            << " dB is unreachable below threshold (max attainable " << g_hi << " dB)";
        throw DomainError(msg.str());
    }

    double lo = 0.0, hi_b = hi;
    double mid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi_b);
        const double g = center_gain_db(mid);
        if (std::abs(g - target_g0_db) < 5e-3) break;
        if (g < target_g0_db) {
            lo = mid;
        } else {
            hi_b = mid;
        }
        if (hi_b - lo < 1e-18) break;
    }
    pump.delta_phi = mid;
    return pump;
}

}  // namespace mejpa
