#pragma once

namespace mejpa {

inline constexpr double pi = 3.14159265358979323846;

/// SI constants (2019 redefinition values) plus the aluminum gap used by
/// the Ambegaokar-Baratoff relation. All overridable; the flux quantum
/// must stay consistent with h/(2e).
struct PhysicalConstants {
    double electron_charge = 1.602176634e-19;  // C
    double planck_h = 6.62607015e-34;          // J*s
    double boltzmann_k = 1.380649e-23;         // J/K
    double flux_quantum = 6.62607015e-34 / (2.0 * 1.602176634e-19);  // Wb
    double al_gap_ev = 180e-6;                 // superconducting gap, eV

    /// Throws DomainError if any value is non-positive or if the flux
    /// quantum deviates from h/(2e) by more than 1e-9 relative.
    void validate() const;
};

}  // namespace mejpa
