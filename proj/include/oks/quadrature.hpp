#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "oks/errors.hpp"

// Adaptive Gauss-Kronrod 7/15 quadrature for smooth integrands. Segments
// whose local error exceeds their share of the budget are bisected; the
// panel cap turns pathological inputs into a NumericalError carrying the
// partial estimate instead of an endless loop.

namespace oks {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
};

namespace detail {

// QUADPACK dqk15 abscissae/weights on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
inline constexpr double gk_weights_k15[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
inline constexpr double gk_weights_g7[8] = {
    0.0, 0.129484966168870, 0.0, 0.279705391489277,
    0.0, 0.381830050505119, 0.0, 0.417959183673469,
};

template <class F>
void gk15(const F& f, double a, double b, double& k15, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = gk_weights_g7[7] * f0;
    double k = gk_weights_k15[7] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk_nodes[i];
        const double fi = f(mid + dx) + f(mid - dx);
        k += gk_weights_k15[i] * fi;
        g7 += gk_weights_g7[i] * fi;
    }
    k15 = k * half;
    err = std::abs((k - g7) * half);
}

} // namespace detail

/// Integrate f over [a, b] to the given relative tolerance. The subdivision
/// cap is expressed in panels (15-point evaluations).
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-10,
                                    std::size_t max_panels = std::size_t{1} << 20) {
    QuadratureResult out;
    if (a == b) return out;

    double whole, whole_err;
    detail::gk15(f, a, b, whole, whole_err);
    out.panels = 1;

    const double scale = std::max(std::abs(whole), 1e-300);
    const double budget = rel_tol * scale;
    const double span = b - a;

    struct Segment {
        double a, b, value, error;
    };
    std::vector<Segment> pending{{a, b, whole, whole_err}};
    double sum = 0.0, err_sum = 0.0;

    while (!pending.empty()) {
        const Segment s = pending.back();
        pending.pop_back();
        if (s.error <= budget * ((s.b - s.a) / span) || s.error == 0.0) {
            sum += s.value;
            err_sum += s.error;
            continue;
        }
        if (out.panels + 2 > max_panels) {
            double partial = sum + s.value;
            for (const auto& p : pending) partial += p.value;
            throw NumericalError("quadrature did not converge within the panel cap", partial,
                                 err_sum + s.error);
        }
        const double mid = 0.5 * (s.a + s.b);
        Segment left{s.a, mid, 0.0, 0.0}, right{mid, s.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        out.panels += 2;
        pending.push_back(left);
        pending.push_back(right);
    }

    out.value = sum;
    out.error_estimate = err_sum;
    return out;
}

} // namespace oks
