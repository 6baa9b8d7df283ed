#pragma once

#include <cmath>
#include <numbers>

#include "oks/beam_model.hpp"
#include "oks/quadrature.hpp"

// Nonlinear phase shift accumulated by the probe through the crystal:
// d(phi) = (2 pi n n2 / lambda) I_g(z) dz, integrated over the effective
// interaction length L_eff = L cos(theta). The vacuum wavelength is used in
// the prefactor with the index appearing explicitly (see README on the
// wavelength convention).

namespace oks {

struct PhaseResult {
    double delta_phi = 0.0;                 // rad, on axis
    bool with_dispersion = false;
    double integration_error_estimate = 0.0; // rad
};

namespace detail {

inline double phase_prefactor(const KerrMedium& m, const BeamGeometry& g) {
    return 2.0 * std::numbers::pi * m.n * m.n2 / g.wavelength.value();
}

inline double effective_thickness(const KerrMedium& m, const BeamGeometry& g) {
    return m.thickness.value() * std::cos(g.crossing_angle.value());
}

} // namespace detail

/// Numerically integrated on-axis phase shift, with or without the
/// dispersion broadening factor. Adaptive quadrature at relative tolerance
/// 1e-10; non-convergence raises NumericalError with the partial estimate.
inline PhaseResult phase_on_axis_numeric(const KerrMedium& medium, const BeamGeometry& geom,
                                         const PulseSpec& pulse, bool with_dispersion) {
    const double l_eff = detail::effective_thickness(medium, geom);
    const double pref = detail::phase_prefactor(medium, geom);
    const double zr = pump_rayleigh_range(geom, medium).value();
    const double z0 = geom.focus_offset.value();
    const double ipk = peak_intensity(pulse, geom.pump_waist).value();
    const double tau0 = pulse.duration.value();
    const double four_ln2_gvd = 4.0 * ln2 * medium.gvd.value();

    const auto integrand = [&](double z) {
        const double zc = (z - z0) / zr;
        double v = ipk / (1.0 + zc * zc);
        if (with_dispersion) {
            const double x = four_ln2_gvd * (z + 0.5 * l_eff) / (tau0 * tau0);
            v /= std::sqrt(1.0 + x * x);
        }
        return pref * v;
    };

    const auto q = integrate_adaptive(integrand, -0.5 * l_eff, 0.5 * l_eff, 1e-10);
    return PhaseResult{q.value, with_dispersion, q.error_estimate};
}

/// Closed-form no-dispersion phase. For a centered focus this is
/// (4 pi n n2 z_R I / lambda) arctan(L_eff / (2 z_R)); with a focus offset the
/// two crystal halves contribute separate arctan terms.
inline PhaseResult phase_on_axis_analytic(const KerrMedium& medium, const BeamGeometry& geom,
                                          const PulseSpec& pulse) {
    const double l_eff = detail::effective_thickness(medium, geom);
    const double pref = detail::phase_prefactor(medium, geom);
    const double zr = pump_rayleigh_range(geom, medium).value();
    const double z0 = geom.focus_offset.value();
    const double ipk = peak_intensity(pulse, geom.pump_waist).value();

    const double phi = pref * ipk * zr *
                       (std::atan((0.5 * l_eff - z0) / zr) + std::atan((0.5 * l_eff + z0) / zr));
    return PhaseResult{phi, false, 0.0};
}

/// Off-axis phase shift: the on-axis value scaled by the pump intensity
/// envelope at the waist plane, exp(-2 (r0/w0)^2).
inline double phase_off_axis(Length r0, const PhaseResult& on_axis, Length pump_waist) {
    if (!(r0.value() >= 0.0)) throw DomainError("phase_off_axis: r0 must be non-negative");
    if (!(pump_waist.value() > 0.0)) throw DomainError("phase_off_axis: waist must be positive");
    const double u = r0.value() / pump_waist.value();
    return on_axis.delta_phi * std::exp(-2.0 * u * u);
}

} // namespace oks
