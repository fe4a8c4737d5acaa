#pragma once

#include "errors.hpp"
#include "fourier_field.hpp"

#include <set>
#include <variant>

namespace circleflow {

/** Parameters (alpha, beta) of the two-parameter family of invariant inner
 * products. Degenerate modes (alpha = -n^2 beta) are computed up front. */
struct MetricParams {
    double alpha = 1.0;
    double beta = 0.0;

    /** True when the family member is positive definite:
     * beta >= 0 and -alpha < beta, or the L^2-like case beta = 0, alpha > 0. */
    bool positive_definite() const {
        if (beta == 0.0) return alpha > 0.0;
        return beta >= 0.0 && -alpha < beta;
    }

    /** Modes n >= 0 with alpha + n^2 beta = 0, up to max_order. */
    std::set<int> degenerate_modes(int max_order) const {
        std::set<int> s;
        for (int n = 0; n <= max_order; ++n)
            if (alpha + beta * n * n == 0.0) s.insert(n);
        return s;
    }
};

inline constexpr MetricParams velling_kirillov{1.0, 0.0};
inline constexpr MetricParams weil_petersson_params{-1.0, 1.0};

/** L_{alpha beta} = beta d^2/dtheta^2 - alpha: mode n is scaled by
 * -(alpha + beta n^2). */
inline FourierField apply_L(MetricParams p, const FourierField& x) {
    FourierField y(x.order());
    for (int n = 0; n <= x.order(); ++n)
        y.set_coeff(n, -(p.alpha + p.beta * n * n) * x.coeff(n));
    return y;
}

/** L^2 pairing <x,y> = (1/2pi) int x y dtheta, by Parseval. */
inline double l2_inner(const FourierField& x, const FourierField& y) {
    int no = std::min(x.order(), y.order());
    double s = x.coeff(0).real() * y.coeff(0).real();
    for (int n = 1; n <= no; ++n) s += 2.0 * (x.coeff(n) * std::conj(y.coeff(n))).real();
    return s;
}

inline double l2_norm(const FourierField& x) { return std::sqrt(std::max(0.0, l2_inner(x, x))); }

/** Skew form omega_{alpha beta}(x,y) = (1/2pi) int (alpha x y' + beta x' y'') dtheta. */
inline double omega(MetricParams p, const FourierField& x, const FourierField& y) {
    FourierField dy = derivative(y);
    return p.alpha * l2_inner(x, dy) + p.beta * l2_inner(derivative(x), derivative(dy));
}

/** Invariant inner product (x,y)_{alpha beta}
 *   = omega(J(x - eta0 x), y - eta0 y) + eta0(x) eta0(y),
 * which equals <L J x' + eta0(x), y> under the L^2 pairing. */
inline double inner(MetricParams p, const FourierField& x, const FourierField& y) {
    FourierField x0 = project(x, Subspace::Vect0);
    FourierField y0 = project(y, Subspace::Vect0);
    return omega(p, hilbert(x0), y0) + eta0(x) * eta0(y);
}

/** ad_x^T under the L^2 pairing: x y' + 2 x' y, exact at order Nx+Ny. */
inline FourierField ad_transpose(const FourierField& x, const FourierField& y) {
    return multiply(x, derivative(y)) + 2.0 * multiply(derivative(x), y);
}

// ---------------------------------------------------------------------------
// Inertia operators

enum class InertiaTag { L2Identity, Sobolev, Kaehler };

/** Diagonal inertia operator A linking a metric to the L^2 pairing, stored as
 * an explicit Fourier multiplier. Multipliers:
 *   L2Identity : 1
 *   Sobolev    : alpha + beta n^2          (A = -L_{alpha beta})
 *   Kaehler    : |n| (alpha + beta n^2)    (A = L_{alpha beta} J d/dtheta, a_0 = 0)
 */
struct InertiaKind {
    InertiaTag tag = InertiaTag::L2Identity;
    MetricParams params{};
    Subspace domain = Subspace::Full;

    static InertiaKind l2(Subspace dom = Subspace::Full) {
        return {InertiaTag::L2Identity, MetricParams{}, dom};
    }
    static InertiaKind sobolev(MetricParams p, Subspace dom = Subspace::Full) {
        return {InertiaTag::Sobolev, p, dom};
    }
    static InertiaKind kaehler(MetricParams p, Subspace dom = Subspace::Vect0) {
        return {InertiaTag::Kaehler, p, dom};
    }

    double multiplier(int n) const {
        int a = std::abs(n);
        switch (tag) {
            case InertiaTag::L2Identity: return 1.0;
            case InertiaTag::Sobolev: return params.alpha + params.beta * a * a;
            case InertiaTag::Kaehler: return a * (params.alpha + params.beta * a * a);
        }
        return 0.0;
    }
};

inline FourierField inertia_apply(const InertiaKind& k, const FourierField& x) {
    if (!supported_on_rel(x, k.domain))
        throw DomainError("inertia_apply: field has modes outside the operator domain");
    FourierField y(x.order());
    for (int n = 0; n <= x.order(); ++n)
        if (retains(k.domain, n)) y.set_coeff(n, k.multiplier(n) * x.coeff(n));
    return y;
}

/** Inverse of inertia_apply on the operator's domain. Throws when a nonzero
 * coefficient sits on a mode with vanishing multiplier. */
inline FourierField inertia_invert(const InertiaKind& k, const FourierField& m,
                                   double zero_tol = 0.0) {
    if (!supported_on_rel(m, k.domain))
        throw DomainError("inertia_invert: field has modes outside the operator domain");
    FourierField x(m.order());
    for (int n = 0; n <= m.order(); ++n) {
        if (!retains(k.domain, n)) continue;
        double a = k.multiplier(n);
        cplx c = m.coeff(n);
        if (a == 0.0) {
            if (std::abs(c) > zero_tol)
                throw SingularModeError(n, "inertia_invert: singular mode n=" + std::to_string(n));
            continue;
        }
        x.set_coeff(n, c / a);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Correspondence with normalized univalent tangent vectors

/** Tangent vector F(z) = sum_{n>=1} a_n z^n at the identity of the space of
 * normalized univalent functions. */
struct UnivalentTangent {
    std::vector<cplx> a;  // a[n-1] = a_n

    int order() const { return static_cast<int>(a.size()); }
    cplx coeff(int n) const {
        return (n >= 1 && n <= order()) ? a[static_cast<size_t>(n - 1)] : cplx(0.0);
    }
};

/** d pi: zero-mean vector fields to univalent tangents,
 * F(e^{i theta}) = -(i/2)(x - i J x), so a_n = -i c_n for n >= 1. */
inline UnivalentTangent to_univalent(const FourierField& x) {
    if (std::abs(eta0(x)) > 1e-14)
        throw DomainError("to_univalent: field must have zero mean");
    UnivalentTangent f;
    f.a.resize(static_cast<size_t>(x.order()));
    for (int n = 1; n <= x.order(); ++n)
        f.a[static_cast<size_t>(n - 1)] = cplx(0.0, -1.0) * x.coeff(n);
    return f;
}

/** Hermitian metric 2 sum (alpha n + beta n^3) a_n conj(b_n); the real part is
 * the Riemannian metric, the imaginary part carries the symplectic form. */
inline cplx kirillov_metric(MetricParams p, const UnivalentTangent& f, const UnivalentTangent& g) {
    cplx s(0.0);
    int no = std::max(f.order(), g.order());
    for (int n = 1; n <= no; ++n)
        s += (p.alpha * n + p.beta * n * n * n) * f.coeff(n) * std::conj(g.coeff(n));
    return 2.0 * s;
}

}  // namespace circleflow
