#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace mejpa {

using cplx = std::complex<double>;

/// Dispersionless transmission-line section. Electrical length scales
/// linearly with frequency: beta*l = theta_ref * f / f_ref.
struct LineSection {
    double z0 = 50.0;        // characteristic impedance, Ohm
    double f_ref = 0.0;      // frequency where theta_ref applies, Hz
    double theta_ref = 0.0;  // electrical length at f_ref, rad
    double loss_db = 0.0;    // attenuation through the section, dB

    void validate() const;
};

LineSection quarter_wave_section(double z0, double f_ref);
LineSection half_wave_section(double z0, double f_ref);

/// Transmission (ABCD) matrix of a reciprocal two-port, det = 1.
struct TwoPortABCD {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};  // Ohm
    cplx c{0.0, 0.0};  // 1/Ohm
    cplx d{1.0, 0.0};

    cplx det() const { return a * d - b * c; }
    TwoPortABCD operator*(const TwoPortABCD& rhs) const;
};

/// Result of the linear-impedance characterization around a band center:
/// Z(w) ~ r_match + i alpha (w - w_center).
struct RAlphaFit {
    double r_match = 0.0;  // Ohm
    double alpha = 0.0;    // Ohm*s
    double z_eff = 0.0;    // alpha * w_center / 2, Ohm
};

/// Environment seen by the device: a real source impedance behind an
/// ordered chain of line sections (listed source to device), with an
/// optional extra source-side segment modeling input-line standing waves.
struct EnvironmentModel {
    double source_impedance = 50.0;  // Ohm
    std::vector<LineSection> sections;
    std::optional<LineSection> ripple_segment;
    std::optional<RAlphaFit> fit;  // cached characterization, if computed

    void validate() const;

    /// Full chain source to device, ripple segment first when present.
    std::vector<LineSection> chain() const;
};

/// ABCD matrix of one section at frequency f.
TwoPortABCD abcd_of_line(const LineSection& section, double f);

/// Ordered product of section matrices (first element nearest port 1).
TwoPortABCD cascade(std::span<const LineSection> sections, double f);

/// Impedance seen from the device plane looking back through the chain
/// into the source impedance.
cplx impedance_looking_into(const EnvironmentModel& env, double f);

/// Admittance form of the above.
cplx admittance_looking_into(const EnvironmentModel& env, double f);

/// Characterize the environment around f_center: r = Re Z(f_center),
/// alpha = d Im Z / dw by five-point central difference, z_eff = alpha*w/2.
/// Im Z must be monotone over the span (relative half-width span_rel).
RAlphaFit fit_r_alpha(const EnvironmentModel& env, double f_center,
                      double span_rel = 0.01);

}  // namespace mejpa
