#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oks/transmittance.hpp"

// Temporal instrument response: the gate's transmittance as a function of
// probe arrival time and its FWHM (the shutter time resolution).
//
// Two conventions are provided. "constant_intensity" drives a single sin^2
// gate whose peak is pinned to the spatially averaged efficiency and whose
// envelope uses the dispersion-broadened effective duration (the z-average of
// tau(z) over the crystal). "z_resolved" integrates the local, progressively
// broadened pulse along z and then normalizes the peak the same way; it is
// the physically resolved alternative and differs only for strong dispersion.

namespace oks {

enum class Convention { constant_intensity, z_resolved };

inline std::string_view to_string(Convention c) {
    return c == Convention::constant_intensity ? "constant-intensity" : "z-resolved";
}

struct TemporalResponse {
    std::vector<Time> times;
    std::vector<double> transmittance;
    std::optional<Time> fwhm;     // empty when the gate never opens
    double peak_transmittance = 0.0;
    Convention convention = Convention::constant_intensity;
};

struct TimeWindow {
    Time t_min;
    Time t_max;
};

/// Normalized temporal envelope with FWHM `effective_duration`, peaking at
/// the pulse center: exp(-4 ln2 (t-t0)^2 / tau_eff^2).
inline double gate_profile(Time t, const PulseSpec& pulse, Time effective_duration) {
    if (!(effective_duration.value() > 0.0))
        throw DomainError("gate_profile: effective duration must be positive");
    const double dt = (t.value() - pulse.center.value()) / effective_duration.value();
    return std::exp(-4.0 * ln2 * dt * dt);
}

/// z-averaged broadened FWHM duration over the effective crystal length.
/// Reduces to tau0 exactly for gvd = 0 or with dispersion disabled.
inline Time effective_gate_duration(const KerrMedium& medium, const BeamGeometry& geom,
                                    const PulseSpec& pulse, bool with_dispersion) {
    const double tau0 = pulse.duration.value();
    if (!with_dispersion || medium.gvd.value() == 0.0) return Time{tau0};
    const double l_eff = detail::effective_thickness(medium, geom);
    const Length leff{l_eff};
    const auto q = integrate_adaptive(
        [&](double z) {
            return broadened_duration(Length{z}, leff, pulse.duration, medium.gvd).value();
        },
        -0.5 * l_eff, 0.5 * l_eff, 1e-12);
    return Time{q.value / l_eff};
}

/// FWHM of a sampled curve: bracket the half-maximum crossing on each side of
/// the peak, then bisect the locally interpolated curve to 1e-3 fs.
inline Time fwhm_of(std::span<const Time> times, std::span<const double> values) {
    if (times.size() != values.size() || times.size() < 3)
        throw AnalysisError("fwhm_of: need at least 3 matching samples");

    std::size_t peak = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[peak]) peak = i;
    const double half = 0.5 * values[peak];
    if (!(values[peak] > 0.0))
        throw AnalysisError("fwhm_of: signal has no positive peak");

    constexpr double tol = 1e-18; // 1e-3 fs
    const auto bisect = [&](std::size_t below_idx, std::size_t above_idx) {
        // linear interpolation between the bracketing samples
        const double t_below = times[below_idx].value();
        const double t_above = times[above_idx].value();
        const auto lerp = [&](double t) {
            const double u = (t - t_below) / (t_above - t_below);
            return values[below_idx] + u * (values[above_idx] - values[below_idx]) - half;
        };
        double ta = std::min(t_below, t_above);
        double tb = std::max(t_below, t_above);
        double fa = lerp(ta);
        while (tb - ta > tol) {
            const double tm = 0.5 * (ta + tb);
            const double fm = lerp(tm);
            if ((fm < 0.0) == (fa < 0.0)) {
                ta = tm;
                fa = fm;
            } else {
                tb = tm;
            }
        }
        return 0.5 * (ta + tb);
    };

    // left crossing: walk outward from the peak until the curve drops below half
    std::optional<double> left, right;
    for (std::size_t i = peak; i-- > 0;) {
        if (values[i] < half && values[i + 1] >= half) {
            left = bisect(i, i + 1);
            break;
        }
    }
    for (std::size_t i = peak; i + 1 < values.size(); ++i) {
        if (values[i] >= half && values[i + 1] < half) {
            right = bisect(i + 1, i);
            break;
        }
    }
    if (!left || !right)
        throw AnalysisError("fwhm_of: no half-maximum crossing found on " +
                            std::string(!left ? "the left" : "the right"));
    return Time{*right - *left};
}

namespace detail {

inline std::vector<Time> sample_times(const TimeWindow& w, std::size_t n) {
    std::vector<Time> t(n);
    const double a = w.t_min.value(), b = w.t_max.value();
    for (std::size_t i = 0; i < n; ++i)
        t[i] = Time{a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)};
    return t;
}

} // namespace detail

/// Time-dependent transmittance of the open gate. The peak equals the
/// Eq.-style averaged gate efficiency in both conventions by construction.
inline TemporalResponse temporal_response(const KerrMedium& medium, const BeamGeometry& geom,
                                          const PulseSpec& pulse, Convention convention,
                                          bool with_dispersion,
                                          std::optional<TimeWindow> window = std::nullopt,
                                          std::size_t n_samples = 2001) {
    if (n_samples < 3) throw DomainError("temporal_response: need at least 3 samples");

    const double t0 = pulse.center.value();
    const Time tau_eff = effective_gate_duration(medium, geom, pulse, with_dispersion);
    const TimeWindow w = window.value_or(
        TimeWindow{Time{t0 - 5.0 * tau_eff.value()}, Time{t0 + 5.0 * tau_eff.value()}});
    if (!(w.t_min.value() <= t0 && t0 <= w.t_max.value()) || !(w.t_min.value() < w.t_max.value()))
        throw DomainError("temporal_response: time window must cover the pulse center");

    TemporalResponse out;
    out.convention = convention;
    out.times = detail::sample_times(w, n_samples);
    out.transmittance.assign(n_samples, 0.0);

    const double t_eff = gate_efficiency(medium, geom, pulse, with_dispersion).transmittance;
    if (t_eff <= 0.0) {
        // gate never opens: all-zero response, FWHM undefined
        return out;
    }
    const double phi_eff = 2.0 * std::asin(std::sqrt(std::min(t_eff, 1.0)));

    if (convention == Convention::constant_intensity) {
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double g = gate_profile(out.times[i], pulse, tau_eff);
            const double s = std::sin(0.5 * phi_eff * g);
            out.transmittance[i] = s * s;
        }
    } else {
        const double l_eff = detail::effective_thickness(medium, geom);
        const Length leff{l_eff};
        const double zr = pump_rayleigh_range(geom, medium).value();
        const double z0 = geom.focus_offset.value();
        const double ipk = peak_intensity(pulse, geom.pump_waist).value();
        const double pref = detail::phase_prefactor(medium, geom);

        const auto phase_at = [&](double t) {
            const auto q = integrate_adaptive(
                [&](double z) {
                    const double zc = (z - z0) / zr;
                    double v = ipk / (1.0 + zc * zc);
                    double tau_z = pulse.duration.value();
                    if (with_dispersion) {
                        v *= broadening_ratio(Length{z}, leff, pulse.duration, medium.gvd);
                        tau_z = broadened_duration(Length{z}, leff, pulse.duration,
                                                   medium.gvd).value();
                    }
                    const double dt = (t - t0) / tau_z;
                    return pref * v * std::exp(-4.0 * ln2 * dt * dt);
                },
                -0.5 * l_eff, 0.5 * l_eff, 1e-10);
            return q.value;
        };

        const double peak_phase = phase_at(t0);
        const double scale = phi_eff / peak_phase;
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double s = std::sin(0.5 * scale * phase_at(out.times[i].value()));
            out.transmittance[i] = s * s;
        }
    }

    out.peak_transmittance =
        *std::max_element(out.transmittance.begin(), out.transmittance.end());
    out.fwhm = fwhm_of(out.times, out.transmittance);
    return out;
}

} // namespace oks
