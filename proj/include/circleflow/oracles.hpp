#pragma once

#include "fourier_field.hpp"

#include <functional>

namespace circleflow::oracles {

/** Principal-value quadrature of the conjugate-function kernel,
 *   (J x)(theta) = (1/2pi) p.v. int x(t) / tan((t - theta)/2) dt,
 * on a uniform grid of even size centered at the singularity so the odd
 * singular part cancels pairwise. Independent of the spectral multiplier. */
inline double hilbert_pv_quadrature(const std::function<double(double)>& x, double theta,
                                    int nodes = 4096) {
    double h = two_pi / nodes;
    double s = 0.0;
    for (int k = 0; k < nodes; ++k) {
        double t = theta + (k + 0.5) * h;
        s += x(t) / std::tan(0.5 * (t - theta));
    }
    return s * h / two_pi;
}

/** (1/2pi) int x(theta) y(theta) dtheta by the trapezoid rule on a uniform
 * periodic grid; the quadrature route for adjointness checks. */
inline double quadrature_l2(const std::function<double(double)>& x,
                            const std::function<double(double)>& y, int nodes = 2048) {
    double s = 0.0;
    for (int k = 0; k < nodes; ++k) {
        double t = two_pi * k / nodes;
        s += x(t) * y(t);
    }
    return s / nodes;
}

/** Method-of-characteristics reference for udot = 3 u u': u is constant along
 * dtheta/dt = -3u, so u(theta, t) = u0(theta0) with theta = theta0 - 3 u0(theta0) t.
 * Valid before wave breaking (1 - 3 u0' t > 0). Solved by Newton per point. */
inline double burgers_characteristics(const FourierField& u0, double theta, double t) {
    FourierField du0 = derivative(u0);
    double th0 = theta;
    for (int it = 0; it < 200; ++it) {
        double g = th0 - 3.0 * u0.evaluate(th0) * t - theta;
        double dg = 1.0 - 3.0 * du0.evaluate(th0) * t;
        if (dg <= 0.0) throw std::runtime_error("burgers oracle: past wave breaking");
        double step = g / dg;
        th0 -= step;
        if (std::abs(step) < 1e-14) break;
    }
    return u0.evaluate(th0);
}

}  // namespace circleflow::oracles
