#include "mejpa/junction.hpp"

#include <cmath>
#include <sstream>

#include "mejpa/errors.hpp"

namespace mejpa {

namespace {

// |cos(pi flux)| and the smooth branch sign, evaluated on flux reduced
// modulo 1 so that bias and bias+1 give identical results.
struct FluxTrig {
    double abs_cos;
    double sin_branch;  // sin(pi r) * sign(cos(pi r)), r = flux mod 1
};

FluxTrig flux_trig(double flux) {
    const double r = flux - std::floor(flux);
    const double c = std::cos(pi * r);
    const double s = std::sin(pi * r);
    const double sign = (c >= 0.0) ? 1.0 : -1.0;
    return {std::abs(c), s * sign};
}

double josephson_inductance_at(double i_c_total, double flux,
                               const PhysicalConstants& constants) {
    const FluxTrig t = flux_trig(flux);
    if (t.abs_cos <= cos_floor) {
        std::ostringstream msg;
        msg << "Josephson inductance diverges at flux " << flux
            << " (|cos(pi flux)| = " << t.abs_cos << " <= cos_floor = " << cos_floor << ")";
        throw ValidityError(msg.str());
    }
    return constants.flux_quantum / (2.0 * pi * i_c_total * t.abs_cos);
}

}  // namespace

void PhysicalConstants::validate() const {
    if (electron_charge <= 0.0 || planck_h <= 0.0 || boltzmann_k <= 0.0 ||
        flux_quantum <= 0.0 || al_gap_ev <= 0.0) {
        throw DomainError("physical constants must all be strictly positive");
    }
    const double expected = planck_h / (2.0 * electron_charge);
    if (std::abs(flux_quantum - expected) > 1e-9 * expected) {
        throw DomainError("flux quantum inconsistent with h/(2e)");
    }
}

void FabProcess::validate(const PhysicalConstants& constants) const {
    if (j_c <= 0.0 && ra_product <= 0.0) {
        throw DomainError("FabProcess: need j_c or ra_product");
    }
    if (j_c < 0.0 || ra_product < 0.0) {
        throw DomainError("FabProcess: densities must be positive");
    }
    if (c_per_area <= 0.0) {
        throw DomainError("FabProcess: c_per_area must be positive");
    }
    if (j_c > 0.0 && ra_product > 0.0) {
        // j_c and RA describe the same oxide; cross-check via Ambegaokar-Baratoff
        const double j_c_from_ra = ab_critical_current(ra_product, constants);
        if (std::abs(j_c_from_ra - j_c) > route_tolerance * j_c) {
            std::ostringstream msg;
            msg << "FabProcess: j_c = " << j_c << " A/um^2 disagrees with ra_product = "
                << ra_product << " Ohm*um^2 (implies j_c = " << j_c_from_ra
                << ") beyond " << route_tolerance * 100 << "%";
            throw ConsistencyError(msg.str());
        }
    }
}

void JunctionParams::validate() const {
    if (area <= 0.0) throw DomainError("JunctionParams: area must be positive");
    if (i_c <= 0.0) throw DomainError("JunctionParams: i_c must be positive");
    if (c_j <= 0.0) throw DomainError("JunctionParams: c_j must be positive");
    if (r_n < 0.0) throw DomainError("JunctionParams: r_n must be non-negative");
}

void SquidParams::validate() const {
    if (i_c_total <= 0.0) throw DomainError("SquidParams: i_c_total must be positive");
    if (c_total <= 0.0) throw DomainError("SquidParams: c_total must be positive");
    if (l_stray < 0.0) throw DomainError("SquidParams: l_stray must be non-negative");
    if (!std::isfinite(flux_dc)) throw DomainError("SquidParams: flux_dc must be finite");
}

void ModulationCoefficients::validate() const {
    if (gamma0 <= 0.0) throw DomainError("ModulationCoefficients: gamma0 must be positive");
    if (std::abs(gamma1) >= gamma0) {
        std::ostringstream msg;
        msg << "ModulationCoefficients: |gamma1| = " << std::abs(gamma1)
            << " >= gamma0 = " << gamma0 << " (pump outside small-signal validity)";
        throw ValidityError(msg.str());
    }
}

double ab_critical_current(double r_n, const PhysicalConstants& constants) {
    if (r_n <= 0.0) throw DomainError("ab_critical_current: r_n must be positive");
    const double gap_joule = constants.al_gap_ev * constants.electron_charge;
    return pi * gap_joule / (2.0 * constants.electron_charge * r_n);
}

JunctionParams junction_from_fab(double area, const FabProcess& fab,
                                 const PhysicalConstants& constants) {
    if (area <= 0.0) throw DomainError("junction_from_fab: area must be positive");
    fab.validate(constants);

    JunctionParams j;
    j.area = area;
    j.c_j = fab.c_per_area * area;
    if (fab.ra_product > 0.0) j.r_n = fab.ra_product / area;

    const double i_c_density = (fab.j_c > 0.0) ? fab.j_c * area : 0.0;
    const double i_c_ra = (fab.ra_product > 0.0) ? ab_critical_current(j.r_n, constants) : 0.0;

    if (fab.j_c > 0.0 && fab.ra_product > 0.0) {
        if (std::abs(i_c_density - i_c_ra) > FabProcess::route_tolerance * i_c_density) {
            std::ostringstream msg;
            msg << "junction_from_fab: j_c route gives " << i_c_density
                << " A but RA route gives " << i_c_ra << " A (beyond "
                << FabProcess::route_tolerance * 100 << "%)";
            throw ConsistencyError(msg.str());
        }
        j.i_c = i_c_density;
    } else {
        j.i_c = (fab.j_c > 0.0) ? i_c_density : i_c_ra;
    }
    j.validate();
    return j;
}

SquidParams squid_from_junctions(const JunctionParams& j1, const JunctionParams& j2,
                                 double l_stray, double flux_dc) {
    j1.validate();
    j2.validate();
    SquidParams s;
    s.i_c_total = j1.i_c + j2.i_c;
    s.c_total = j1.c_j + j2.c_j;
    s.l_stray = l_stray;
    s.flux_dc = flux_dc;
    s.validate();
    return s;
}

double squid_inductance(const SquidParams& squid, const PhysicalConstants& constants) {
    squid.validate();
    return josephson_inductance_at(squid.i_c_total, squid.flux_dc, constants);
}

double plasma_frequency(const SquidParams& squid, const PhysicalConstants& constants) {
    const double l_j = squid_inductance(squid, constants);
    return 1.0 / std::sqrt(squid.c_total * (l_j + squid.l_stray));
}

std::vector<TuningPoint> flux_tuning_curve(const SquidParams& squid,
                                           const std::vector<double>& flux_grid,
                                           const PhysicalConstants& constants) {
    squid.validate();
    std::vector<TuningPoint> curve;
    curve.reserve(flux_grid.size());
    for (double flux : flux_grid) {
        SquidParams at = squid;
        at.flux_dc = flux;
        TuningPoint p;
        p.flux = flux;
        try {
            p.freq_hz = plasma_frequency(at, constants) / (2.0 * pi);
        } catch (const ValidityError&) {
            p.freq_hz = std::nan("");
            p.gap = true;
        }
        curve.push_back(p);
    }
    return curve;
}

ModulationCoefficients pump_modulation_coefficients(const SquidParams& squid,
                                                    double delta_phi,
                                                    const PhysicalConstants& constants) {
    if (delta_phi < 0.0 || delta_phi >= 0.1) {
        throw DomainError("pump_modulation_coefficients: delta_phi must lie in [0, 0.1)");
    }
    const double l_j = squid_inductance(squid, constants);
    const double l_total = l_j + squid.l_stray;

    // d(1/L_total)/dflux with L_J = L_J0/|cos(pi flux)|:
    //   dL_J/dflux = L_J0 pi sin(pi r) sgn(cos) / cos^2 = L_J pi sin sgn / |cos|
    const FluxTrig t = flux_trig(squid.flux_dc);
    const double dl_dflux = l_j * pi * t.sin_branch / t.abs_cos;
    const double dgamma_dflux = -dl_dflux / (l_total * l_total);

    ModulationCoefficients mods;
    mods.gamma0 = 1.0 / l_total;
    mods.gamma1 = 0.5 * delta_phi * dgamma_dflux;
    mods.validate();
    return mods;
}

}  // namespace mejpa
