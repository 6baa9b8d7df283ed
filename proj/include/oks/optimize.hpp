#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "oks/transmittance.hpp"

// Pump/probe diameter optimization: coarse grid scan followed by Nelder-Mead
// refinement. The objective is smooth, cheap and two-dimensional, so nothing
// heavier is warranted.

namespace oks {

struct DiameterBounds {
    Length lo;
    Length hi;
};

struct OptimalWaists {
    Length pump_diameter;
    Length probe_diameter;
    EfficiencyResult best;
};

namespace detail {

struct Simplex2D {
    using Point = std::array<double, 2>;

    template <class F>
    static Point maximize(const F& f, Point start, double step0, double step1,
                          const Point& lo, const Point& hi, double improvement_tol,
                          int max_iter = 200) {
        const auto clamp_pt = [&](Point p) {
            p[0] = std::clamp(p[0], lo[0], hi[0]);
            p[1] = std::clamp(p[1], lo[1], hi[1]);
            return p;
        };
        std::array<Point, 3> x{clamp_pt(start),
                               clamp_pt({start[0] + step0, start[1]}),
                               clamp_pt({start[0], start[1] + step1})};
        std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};

        const auto order = [&] {
            // descending: x[0] best (largest objective)
            if (fx[0] < fx[1]) { std::swap(fx[0], fx[1]); std::swap(x[0], x[1]); }
            if (fx[1] < fx[2]) { std::swap(fx[1], fx[2]); std::swap(x[1], x[2]); }
            if (fx[0] < fx[1]) { std::swap(fx[0], fx[1]); std::swap(x[0], x[1]); }
        };
        order();

        double last_best = fx[0];
        int stagnant = 0;
        for (int it = 0; it < max_iter; ++it) {
            const Point c{0.5 * (x[0][0] + x[1][0]), 0.5 * (x[0][1] + x[1][1])};
            const auto blend = [&](double t) {
                return clamp_pt({c[0] + t * (c[0] - x[2][0]), c[1] + t * (c[1] - x[2][1])});
            };

            const Point xr = blend(1.0);
            const double fr = f(xr);
            if (fr > fx[0]) {
                const Point xe = blend(2.0);
                const double fe = f(xe);
                if (fe > fr) { x[2] = xe; fx[2] = fe; }
                else         { x[2] = xr; fx[2] = fr; }
            } else if (fr > fx[1]) {
                x[2] = xr; fx[2] = fr;
            } else {
                const Point xc = blend(fr > fx[2] ? 0.5 : -0.5);
                const double fc = f(xc);
                if (fc > std::max(fr, fx[2])) {
                    x[2] = xc; fx[2] = fc;
                } else {
                    for (int j = 1; j < 3; ++j) {
                        x[j] = clamp_pt({x[0][0] + 0.5 * (x[j][0] - x[0][0]),
                                         x[0][1] + 0.5 * (x[j][1] - x[0][1])});
                        fx[j] = f(x[j]);
                    }
                }
            }
            order();
            if (fx[0] - last_best < improvement_tol) {
                if (++stagnant >= 3) break;
            } else {
                stagnant = 0;
            }
            last_best = fx[0];
        }
        return x[0];
    }
};

} // namespace detail

/// Maximize gate_efficiency over (2w0, 2w1) inside the given bounds: 32x32
/// grid scan, then simplex refinement until the per-step improvement drops
/// below 1e-6. Ties (flat objective) resolve to the lower-bound corner.
inline OptimalWaists optimal_waists(const KerrMedium& medium, const PulseSpec& pulse,
                                    Length wavelength, Angle crossing_angle,
                                    DiameterBounds pump_bounds, DiameterBounds probe_bounds,
                                    bool with_dispersion, std::size_t grid_points = 32) {
    const auto check = [](const DiameterBounds& b, const char* name) {
        if (!(b.lo.value() > 0.0) || !(b.hi.value() > b.lo.value()))
            throw ConfigError(std::string(name) +
                              " bounds must be positive and strictly ordered");
    };
    check(pump_bounds, "pump diameter");
    check(probe_bounds, "probe diameter");
    if (grid_points < 2) throw ConfigError("grid must have at least 2 points per axis");

    const auto objective = [&](std::array<double, 2> d) {
        const BeamGeometry geom(wavelength, Length{0.5 * d[0]}, Length{0.5 * d[1]},
                                crossing_angle);
        return gate_efficiency(medium, geom, pulse, with_dispersion).transmittance;
    };

    // coarse scan; strict > keeps the first (lowest-corner) cell on ties
    std::array<double, 2> best{pump_bounds.lo.value(), probe_bounds.lo.value()};
    double best_val = -1.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double d0 = pump_bounds.lo.value() +
                          (pump_bounds.hi.value() - pump_bounds.lo.value()) *
                              static_cast<double>(i) / static_cast<double>(grid_points - 1);
        for (std::size_t j = 0; j < grid_points; ++j) {
            const double d1 = probe_bounds.lo.value() +
                              (probe_bounds.hi.value() - probe_bounds.lo.value()) *
                                  static_cast<double>(j) / static_cast<double>(grid_points - 1);
            const double v = objective({d0, d1});
            if (v > best_val) {
                best_val = v;
                best = {d0, d1};
            }
        }
    }

    const std::array<double, 2> lo{pump_bounds.lo.value(), probe_bounds.lo.value()};
    const std::array<double, 2> hi{pump_bounds.hi.value(), probe_bounds.hi.value()};
    const double cell0 = (hi[0] - lo[0]) / static_cast<double>(grid_points - 1);
    const double cell1 = (hi[1] - lo[1]) / static_cast<double>(grid_points - 1);

    // refine, then restart once with a smaller simplex in case the first run
    // collapsed against a bound
    auto refined = detail::Simplex2D::maximize(objective, best, cell0, cell1, lo, hi, 1e-6);
    refined = detail::Simplex2D::maximize(objective, refined, 0.1 * cell0, 0.1 * cell1, lo, hi,
                                          1e-6);
    if (objective(refined) < best_val) refined = best;

    const BeamGeometry geom(wavelength, Length{0.5 * refined[0]}, Length{0.5 * refined[1]},
                            crossing_angle);
    return OptimalWaists{Length{refined[0]}, Length{refined[1]},
                         gate_efficiency(medium, geom, pulse, with_dispersion)};
}

} // namespace oks
