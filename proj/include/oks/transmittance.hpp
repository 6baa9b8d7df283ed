#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "oks/kerr_phase.hpp"

// Gate transmission: on-axis sin^2(dphi/2), per-ray transmittance through the
// off-axis phase envelope, the probe-profile-averaged gate efficiency, and
// 2-D efficiency maps over pump/probe beam diameters.

namespace oks {

struct EfficiencyResult {
    double transmittance = 0.0;   // in [0, 1]
    double on_axis_phase = 0.0;   // rad
    double quadrature_error = 0.0;
};

/// T(0, L) = sin^2(dphi / 2).
inline EfficiencyResult transmittance_on_axis(const PhaseResult& phase) {
    if (!(phase.delta_phi >= 0.0)) throw DomainError("transmittance: phase must be non-negative");
    const double s = std::sin(0.5 * phase.delta_phi);
    return EfficiencyResult{s * s, phase.delta_phi, 0.0};
}

/// Transmittance of the ray at waist-plane offset r0.
inline double transmittance_ray(Length r0, const PhaseResult& on_axis, Length pump_waist) {
    const double s = std::sin(0.5 * phase_off_axis(r0, on_axis, pump_waist));
    return s * s;
}

namespace detail {

// Radial truncation: weight and envelope decay like exp(-2 r^2 / w^2), so the
// neglected tail beyond 6 max(w0, w1) is below 1e-15 of the integral.
inline double radial_cutoff(double w0, double w1) { return 6.0 * std::max(w0, w1); }

} // namespace detail

/// Probe-profile-averaged gate efficiency:
/// T = int T(r0) exp(-2 r0^2/w1^2) r0 dr0 / int exp(-2 r0^2/w1^2) r0 dr0,
/// the denominator taken analytically as w1^2/4.
inline EfficiencyResult gate_efficiency(const KerrMedium& medium, const BeamGeometry& geom,
                                        const PulseSpec& pulse, bool with_dispersion) {
    const PhaseResult phase = phase_on_axis_numeric(medium, geom, pulse, with_dispersion);
    const double w0 = geom.pump_waist.value();
    const double w1 = geom.probe_waist.value();
    const double dphi0 = phase.delta_phi;

    const auto integrand = [&](double r) {
        const double u = r / w0;
        const double s = std::sin(0.5 * dphi0 * std::exp(-2.0 * u * u));
        const double v = r / w1;
        return s * s * std::exp(-2.0 * v * v) * r;
    };

    const auto q = integrate_adaptive(integrand, 0.0, detail::radial_cutoff(w0, w1), 1e-9);
    const double denom = 0.25 * w1 * w1;
    const double t = std::clamp(q.value / denom, 0.0, 1.0);
    return EfficiencyResult{t, dphi0, q.error_estimate / denom};
}

/// Rectangular efficiency map over beam diameters (2w0, 2w1). Cells that fail
/// to converge are recorded as quiet NaN markers and counted, never zeroed.
struct SweepGrid {
    std::vector<Length> pump_diameters;   // strictly increasing
    std::vector<Length> probe_diameters;  // strictly increasing
    std::vector<double> efficiency;       // row-major, probe axis fastest
    std::size_t failed_cells = 0;

    double at(std::size_t pump_index, std::size_t probe_index) const {
        return efficiency[pump_index * probe_diameters.size() + probe_index];
    }
};

namespace detail {

inline void validate_axis(const std::vector<Length>& axis, const char* name) {
    if (axis.empty()) throw ConfigError(std::string(name) + " axis must not be empty");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!(axis[i].value() > 0.0))
            throw ConfigError(std::string(name) + " axis values must be positive");
        if (i > 0 && !(axis[i].value() > axis[i - 1].value()))
            throw ConfigError(std::string(name) + " axis must be strictly increasing");
    }
}

} // namespace detail

/// Evaluate gate_efficiency over the Cartesian product of diameter axes.
/// Cells are independent; `threads` bounds the worker count and the assembly
/// is by index, so the result is identical for any schedule.
inline SweepGrid efficiency_map(const KerrMedium& medium, const PulseSpec& pulse,
                                Length wavelength, Angle crossing_angle,
                                std::vector<Length> pump_diameters,
                                std::vector<Length> probe_diameters, bool with_dispersion,
                                unsigned threads = 1) {
    detail::validate_axis(pump_diameters, "pump diameter");
    detail::validate_axis(probe_diameters, "probe diameter");

    SweepGrid grid;
    grid.pump_diameters = std::move(pump_diameters);
    grid.probe_diameters = std::move(probe_diameters);
    const std::size_t n_pump = grid.pump_diameters.size();
    const std::size_t n_probe = grid.probe_diameters.size();
    grid.efficiency.assign(n_pump * n_probe, 0.0);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> failures{0};
    const std::size_t total = n_pump * n_probe;

    const auto worker = [&] {
        for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
            const std::size_t ip = idx / n_probe;
            const std::size_t iq = idx % n_probe;
            const BeamGeometry geom(wavelength, 0.5 * grid.pump_diameters[ip],
                                    0.5 * grid.probe_diameters[iq], crossing_angle);
            try {
                grid.efficiency[idx] =
                    gate_efficiency(medium, geom, pulse, with_dispersion).transmittance;
            } catch (const NumericalError&) {
                grid.efficiency[idx] = std::numeric_limits<double>::quiet_NaN();
                failures.fetch_add(1);
            }
        }
    };

    const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, (unsigned)total));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    grid.failed_cells = failures.load();
    return grid;
}

} // namespace oks
