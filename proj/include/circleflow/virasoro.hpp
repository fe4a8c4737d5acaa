#pragma once

#include "diffeo.hpp"
#include "metrics.hpp"

namespace circleflow {

/** Central-extension parameters (mu, nu); nu = 0 is the trivial extension. */
struct CentralParams {
    double mu = 0.0;
    double nu = 1.0;
};

/** Gelfand-Fuchs algebra 2-cocycle omega_{mu nu}(x,y). */
inline double gelfand_fuchs(CentralParams p, const FourierField& x, const FourierField& y) {
    return omega(MetricParams{p.mu, p.nu}, x, y);
}

/** A(phi1, phi2) = (1/4pi) int (-phi1 o phi2 + phi1 + phi2 - id) dtheta.
 * The integrand reduces to f1(theta) - f1(phi2(theta)) in displacements. */
inline double cocycle_A(const Diffeo& phi1, const Diffeo& phi2) {
    int m = phi1.grid_size();
    if (phi2.grid_size() != m) throw DomainError("cocycle_A: incompatible grids");
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
        double th = phi1.node(j);
        s += (phi1.value(th) - th) - (phi1.value(phi2.value(th)) - phi2.value(th));
    }
    return s / (2.0 * m);
}

/** Bott cocycle B(phi1, phi2) = (1/4pi) int log (phi1 o phi2)' d log phi2',
 * by spectral differentiation and trapezoidal quadrature on the grid. */
inline double cocycle_B(const Diffeo& phi1, const Diffeo& phi2) {
    int m = phi1.grid_size();
    if (phi2.grid_size() != m) throw DomainError("cocycle_B: incompatible grids");
    std::vector<double> logcomp(static_cast<size_t>(m)), logp2(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        double th = phi2.node(j);
        double d2 = phi2.derivative(th);
        double d1 = phi1.derivative(phi2.value(th));
        if (d1 <= 0.0 || d2 <= 0.0) throw DomainError("cocycle_B: diffeomorphism not monotone");
        logcomp[static_cast<size_t>(j)] = std::log(d1 * d2);
        logp2[static_cast<size_t>(j)] = std::log(d2);
    }
    std::vector<double> dlogp2 = detail::spectral_derivative(logp2);
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += logcomp[static_cast<size_t>(j)] * dlogp2[static_cast<size_t>(j)];
    return s / (2.0 * m);
}

/** Element of the centrally extended group: universal-cover diffeomorphism
 * plus a central real coordinate. */
struct VirasoroElement {
    Diffeo phi;
    double b = 0.0;
};

/** Group law (phi1,b1)(phi2,b2)
 *  = (phi1 o phi2, b1 + b2 + mu A(phi1,phi2) + nu B(phi1,phi2)). */
inline VirasoroElement vir_multiply(CentralParams p, const VirasoroElement& g1,
                                    const VirasoroElement& g2) {
    return {g1.phi.compose(g2.phi),
            g1.b + g2.b + p.mu * cocycle_A(g1.phi, g2.phi) + p.nu * cocycle_B(g1.phi, g2.phi)};
}

/** Element (x, a) of Vect S^1 + R. */
struct VirVector {
    FourierField x;
    double a = 0.0;
};

/** Extended bracket [(x,a1),(y,a2)] = ([x,y], omega_{mu nu}(x,y)). */
inline VirVector vir_bracket(CentralParams p, const VirVector& v, const VirVector& w,
                             int out_order = -1) {
    return {bracket(v.x, w.x, out_order), gelfand_fuchs(p, v.x, w.x)};
}

inline double vir_inner(const VirVector& v, const VirVector& w) {
    return l2_inner(v.x, w.x) + v.a * w.a;
}

/** ad-transpose of the extension under <x,y> + a1 a2:
 *  ad^T_{(x,a)}(y,a0) = (x y' + 2 x' y + a0 L_{mu nu} x', 0). */
inline VirVector vir_ad_transpose(CentralParams p, const VirVector& v, const VirVector& w) {
    FourierField field = ad_transpose(v.x, w.x);
    field += w.a * apply_L(MetricParams{p.mu, p.nu}, derivative(v.x));
    return {std::move(field), 0.0};
}

}  // namespace circleflow
