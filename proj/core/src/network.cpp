#include "mejpa/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mejpa/constants.hpp"
#include "mejpa/errors.hpp"

namespace mejpa {

namespace {

constexpr double db_per_neper = 8.685889638065035;  // 20/ln(10)

}  // namespace

void LineSection::validate() const {
    if (z0 <= 0.0) throw DomainError("LineSection: z0 must be positive");
    if (f_ref <= 0.0) throw DomainError("LineSection: f_ref must be positive");
    if (theta_ref <= 0.0) throw DomainError("LineSection: theta_ref must be positive");
    if (loss_db < 0.0) throw DomainError("LineSection: loss_db must be non-negative");
}

LineSection quarter_wave_section(double z0, double f_ref) {
    return {z0, f_ref, pi / 2.0, 0.0};
}

LineSection half_wave_section(double z0, double f_ref) {
    return {z0, f_ref, pi, 0.0};
}

TwoPortABCD TwoPortABCD::operator*(const TwoPortABCD& rhs) const {
    return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
            c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

void EnvironmentModel::validate() const {
    if (source_impedance <= 0.0) {
        throw DomainError("EnvironmentModel: source_impedance must be positive");
    }
    for (const auto& s : sections) s.validate();
    if (ripple_segment) ripple_segment->validate();
}

std::vector<LineSection> EnvironmentModel::chain() const {
    std::vector<LineSection> full;
    full.reserve(sections.size() + 1);
    if (ripple_segment) full.push_back(*ripple_segment);
    full.insert(full.end(), sections.begin(), sections.end());
    return full;
}

TwoPortABCD abcd_of_line(const LineSection& section, double f) {
    if (f <= 0.0) throw DomainError("abcd_of_line: frequency must be positive");
    const double beta_l = section.theta_ref * (f / section.f_ref);
    if (section.loss_db == 0.0) {
        const double ct = std::cos(beta_l);
        const double st = std::sin(beta_l);
        return {cplx{ct, 0.0}, cplx{0.0, section.z0 * st},
                cplx{0.0, st / section.z0}, cplx{ct, 0.0}};
    }
    // uniform loss: gamma*l = alpha_l + i beta_l, alpha frequency-independent
    const cplx gamma_l{section.loss_db / db_per_neper, beta_l};
    const cplx ch = std::cosh(gamma_l);
    const cplx sh = std::sinh(gamma_l);
    return {ch, section.z0 * sh, sh / section.z0, ch};
}

TwoPortABCD cascade(std::span<const LineSection> sections, double f) {
    if (sections.empty()) throw DomainError("cascade: section list is empty");
    TwoPortABCD m = abcd_of_line(sections[0], f);
    for (std::size_t i = 1; i < sections.size(); ++i) {
        m = m * abcd_of_line(sections[i], f);
    }
    return m;
}

cplx impedance_looking_into(const EnvironmentModel& env, double f) {
    env.validate();
    if (f <= 0.0) throw DomainError("impedance_looking_into: frequency must be positive");
    const cplx z_src{env.source_impedance, 0.0};
    auto full = env.chain();
    if (full.empty()) return z_src;
    // device-to-source orientation: reverse the chain and use the
    // standard port-1 input-impedance formula
    std::reverse(full.begin(), full.end());
    const TwoPortABCD m = cascade(full, f);
    return (m.a * z_src + m.b) / (m.c * z_src + m.d);
}

cplx admittance_looking_into(const EnvironmentModel& env, double f) {
    return 1.0 / impedance_looking_into(env, f);
}

RAlphaFit fit_r_alpha(const EnvironmentModel& env, double f_center, double span_rel) {
    if (f_center <= 0.0) throw DomainError("fit_r_alpha: f_center must be positive");
    if (span_rel <= 0.0 || span_rel >= 0.5) {
        throw DomainError("fit_r_alpha: span_rel must lie in (0, 0.5)");
    }

    // monotonicity of Im Z over the span
    constexpr int n_samples = 21;
    std::vector<double> im(n_samples);
    double im_range = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double f = f_center * (1.0 + span_rel * (2.0 * i / (n_samples - 1) - 1.0));
        im[i] = impedance_looking_into(env, f).imag();
    }
    for (int i = 0; i < n_samples; ++i) {
        for (int j = 0; j < n_samples; ++j) {
            im_range = std::max(im_range, std::abs(im[i] - im[j]));
        }
    }
    const double tol = 1e-9 * std::max(im_range, 1e-12);
    bool rising = false, falling = false;
    for (int i = 0; i + 1 < n_samples; ++i) {
        const double d = im[i + 1] - im[i];
        if (d > tol) rising = true;
        if (d < -tol) falling = true;
    }
    if (rising && falling) {
        std::ostringstream msg;
        msg << "fit_r_alpha: Im Z is non-monotone within +-" << span_rel * 100
            << "% of " << f_center << " Hz";
        throw FitError(msg.str());
    }

    RAlphaFit fit;
    fit.r_match = impedance_looking_into(env, f_center).real();

    // five-point central difference in omega, relative step 1e-4
    const double w0 = 2.0 * pi * f_center;
    const double h = 1e-4 * w0;
    auto im_at = [&](double w) { return impedance_looking_into(env, w / (2.0 * pi)).imag(); };
    fit.alpha = (-im_at(w0 + 2 * h) + 8.0 * im_at(w0 + h) - 8.0 * im_at(w0 - h) +
                 im_at(w0 - 2 * h)) /
                (12.0 * h);
    fit.z_eff = fit.alpha * w0 / 2.0;
    return fit;
}

}  // namespace mejpa
