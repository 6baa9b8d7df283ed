#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "oks/quantities.hpp"

// Gaussian beam and pulse geometry: waists, Rayleigh ranges, ray trajectories,
// and the on-axis gate intensity including temporal broadening by group
// velocity dispersion.

namespace oks {

inline constexpr double ln2 = 0.6931471805599453;

/// Kerr medium constants and crystal thickness.
struct KerrMedium {
    double n;           // linear refractive index
    double n2;          // nonlinear index, m^2/W
    Gvd gvd;            // group velocity dispersion, s^2/m
    Length thickness;   // crystal length L

    KerrMedium(double n_, double n2_, Gvd gvd_, Length thickness_)
        : n(n_), n2(n2_), gvd(gvd_), thickness(thickness_) {
        if (!(n >= 1.0)) throw DomainError("medium.n must be >= 1");
        if (!(n2 > 0.0)) throw DomainError("medium.n2 must be positive");
        if (!(gvd.value() >= 0.0)) throw DomainError("medium.gvd must be non-negative");
        if (!(thickness.value() > 0.0)) throw DomainError("medium.thickness must be positive");
    }
};

/// Pump/probe focusing geometry. Wavelength is the vacuum wavelength; the
/// medium index enters the Rayleigh range explicitly as z_R = pi n w^2 / lambda.
struct BeamGeometry {
    Length wavelength;   // vacuum
    Length pump_waist;   // w0
    Length probe_waist;  // w1
    Angle crossing_angle{0.0};
    Length focus_offset{0.0}; // pump waist position relative to crystal center

    BeamGeometry(Length wavelength_, Length pump_waist_, Length probe_waist_,
                 Angle crossing_angle_ = Angle{0.0}, Length focus_offset_ = Length{0.0})
        : wavelength(wavelength_), pump_waist(pump_waist_), probe_waist(probe_waist_),
          crossing_angle(crossing_angle_), focus_offset(focus_offset_) {
        if (!(wavelength.value() > 0.0)) throw DomainError("geometry.wavelength must be positive");
        if (!(pump_waist.value() > 0.0)) throw DomainError("geometry.pump_waist must be positive");
        if (!(probe_waist.value() > 0.0)) throw DomainError("geometry.probe_waist must be positive");
        const double th = crossing_angle.value();
        if (!(th >= 0.0 && th < std::numbers::pi / 2))
            throw DomainError("geometry.crossing_angle must lie in [0, pi/2)");
        if (!std::isfinite(focus_offset.value()))
            throw DomainError("geometry.focus_offset must be finite");
    }
};

/// Pump pulse: energy, FWHM duration, arrival time of the peak.
struct PulseSpec {
    Energy energy;
    Time duration;  // FWHM
    Time center{0.0};

    PulseSpec(Energy energy_, Time duration_, Time center_ = Time{0.0})
        : energy(energy_), duration(duration_), center(center_) {
        if (!(energy.value() >= 0.0)) throw DomainError("pulse.energy must be non-negative");
        if (!(duration.value() > 0.0)) throw DomainError("pulse.duration must be positive");
    }
};

/// z_R = pi n w^2 / lambda (vacuum wavelength, explicit index factor).
inline Length rayleigh_range(Length waist, Length wavelength, double n) {
    if (!(waist.value() > 0.0)) throw DomainError("rayleigh_range: waist must be positive");
    if (!(wavelength.value() > 0.0)) throw DomainError("rayleigh_range: wavelength must be positive");
    if (!(n >= 1.0)) throw DomainError("rayleigh_range: index must be >= 1");
    return Length{std::numbers::pi * n * waist.value() * waist.value() / wavelength.value()};
}

inline Length pump_rayleigh_range(const BeamGeometry& g, const KerrMedium& m) {
    return rayleigh_range(g.pump_waist, g.wavelength, m.n);
}

inline Length probe_rayleigh_range(const BeamGeometry& g, const KerrMedium& m) {
    return rayleigh_range(g.probe_waist, g.wavelength, m.n);
}

/// Ray distance from the axis after propagating to z: r(z) = r0 sqrt(1+(z/z_R)^2).
inline Length ray_radius(Length r0, Length z, Length rayleigh) {
    if (!(rayleigh.value() > 0.0)) throw DomainError("ray_radius: Rayleigh range must be positive");
    const double zz = z.value() / rayleigh.value();
    return Length{r0.value() * std::sqrt(1.0 + zz * zz)};
}

/// Physical peak intensity at the beam waist for an unbroadened pulse:
/// 2 sqrt(ln2) E / (pi^{3/2} w0^2 tau0).
inline Intensity peak_intensity(const PulseSpec& pulse, Length pump_waist) {
    if (!(pump_waist.value() > 0.0)) throw DomainError("peak_intensity: waist must be positive");
    const double w0 = pump_waist.value();
    const double pi32 = std::pow(std::numbers::pi, 1.5);
    return Intensity{2.0 * std::sqrt(ln2) * pulse.energy.value() /
                     (pi32 * w0 * w0 * pulse.duration.value())};
}

/// Broadened FWHM duration after propagating from the entrance face to z:
/// tau(z) = tau0 sqrt(1 + (4 ln2 gvd (z + L/2) / tau0^2)^2).
inline Time broadened_duration(Length z, Length thickness, Time tau0, Gvd gvd) {
    const double x = 4.0 * ln2 * gvd.value() * (z.value() + 0.5 * thickness.value()) /
                     (tau0.value() * tau0.value());
    return Time{tau0.value() * std::sqrt(1.0 + x * x)};
}

namespace detail {
inline void require_inside_crystal(Length z, Length thickness, const char* who) {
    const double half = 0.5 * thickness.value();
    // tiny slack so quadrature nodes at the faces never trip the check
    const double slack = 1e-12 * thickness.value();
    if (z.value() < -half - slack || z.value() > half + slack)
        throw DomainError(std::string(who) + ": z outside the crystal [-L/2, L/2]");
}
} // namespace detail

/// Raw dispersion factor I_disp(z) = 1 / sqrt(tau0^4 + [4 ln2 gvd (z+L/2)]^2),
/// units 1/s^2. Equals 1/tau0^2 at the entrance face and for gvd = 0.
inline double dispersion_factor(Length z, Length thickness, Time tau0, Gvd gvd) {
    detail::require_inside_crystal(z, thickness, "dispersion_factor");
    const double t2 = tau0.value() * tau0.value();
    const double x = 4.0 * ln2 * gvd.value() * (z.value() + 0.5 * thickness.value());
    return 1.0 / std::sqrt(t2 * t2 + x * x);
}

/// Dimensionless broadening ratio tau0^2 * I_disp(z), in (0, 1].
inline double broadening_ratio(Length z, Length thickness, Time tau0, Gvd gvd) {
    const double t2 = tau0.value() * tau0.value();
    return t2 * dispersion_factor(z, thickness, tau0, gvd);
}

/// On-axis gate intensity I_g(z) with the pump waist at the crystal center
/// (plus any focus offset). With dispersion the peak intensity is scaled by
/// the broadening ratio; without, only the Lorentzian focus factor applies.
inline Intensity on_axis_intensity(Length z, const KerrMedium& medium, const BeamGeometry& geom,
                                   const PulseSpec& pulse, bool with_dispersion) {
    detail::require_inside_crystal(z, medium.thickness, "on_axis_intensity");
    const double zr = pump_rayleigh_range(geom, medium).value();
    const double zc = (z.value() - geom.focus_offset.value()) / zr;
    double value = peak_intensity(pulse, geom.pump_waist).value() / (1.0 + zc * zc);
    if (with_dispersion)
        value *= broadening_ratio(z, medium.thickness, pulse.duration, medium.gvd);
    return Intensity{value};
}

} // namespace oks
