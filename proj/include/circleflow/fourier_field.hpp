#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace circleflow {

using cplx = std::complex<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/** \brief Truncated real trigonometric series on the circle.
 *
 * Represents x(theta) = sum_{|n|<=N} c_n e^{i n theta} with c_{-n} = conj(c_n),
 * storing only the coefficients for n = 0..N. The n = 0 coefficient is kept
 * real so evaluation always returns real values.
 *
 * Quadratic products are formed exactly at order N1+N2 before any truncation,
 * so the geodesic right-hand sides (all quadratic) are alias-free.
 */
class FourierField {
  public:
    FourierField() : c_(1, cplx(0.0)) {}
    explicit FourierField(int order) : c_(static_cast<size_t>(order) + 1, cplx(0.0)) {
        assert(order >= 0);
    }

    static FourierField zero(int order) { return FourierField(order); }

    /** Field c * 1 (constant). */
    static FourierField constant(double c, int order = 0) {
        FourierField f(order);
        f.c_[0] = c;
        return f;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }

    /** Coefficient for a signed mode index; conjugate symmetry for n < 0,
     * zero beyond the truncation order. */
    cplx coeff(int n) const {
        int a = std::abs(n);
        if (a > order()) return cplx(0.0);
        return n >= 0 ? c_[static_cast<size_t>(a)] : std::conj(c_[static_cast<size_t>(a)]);
    }

    /** Set the coefficient for n >= 0. The imaginary part of c_0 is dropped. */
    void set_coeff(int n, cplx v) {
        assert(n >= 0 && n <= order());
        if (n == 0) v = cplx(v.real(), 0.0);
        c_[static_cast<size_t>(n)] = v;
    }

    double evaluate(double theta) const {
        cplx e = std::polar(1.0, theta);
        cplx p = e;
        double s = c_[0].real();
        for (int n = 1; n <= order(); ++n) {
            s += 2.0 * (c_[static_cast<size_t>(n)] * p).real();
            p *= e;
        }
        return s;
    }

    /** Values at the uniform grid theta_j = 2 pi j / m. Requires m >= 2N+1
     * only when the samples are meant to determine the field again. */
    std::vector<double> sample(int m) const {
        std::vector<double> v(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) v[static_cast<size_t>(j)] = evaluate(two_pi * j / m);
        return v;
    }

    /** Recover a field of the given order from samples on a uniform grid.
     * The grid must resolve the requested order: m >= 2*order+1. */
    static FourierField from_samples(const std::vector<double>& v, int ord) {
        int m = static_cast<int>(v.size());
        if (m < 2 * ord + 1)
            throw std::invalid_argument("from_samples: grid too coarse for requested order");
        FourierField f(ord);
        for (int n = 0; n <= ord; ++n) {
            cplx s(0.0);
            for (int j = 0; j < m; ++j)
                s += v[static_cast<size_t>(j)] * std::polar(1.0, -two_pi * n * j / m);
            f.set_coeff(n, s / static_cast<double>(m));
        }
        return f;
    }

    bool finite() const {
        for (const cplx& z : c_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    FourierField& operator+=(const FourierField& o) {
        if (o.order() > order()) c_.resize(static_cast<size_t>(o.order()) + 1, cplx(0.0));
        for (int n = 0; n <= o.order(); ++n) c_[static_cast<size_t>(n)] += o.c_[static_cast<size_t>(n)];
        return *this;
    }
    FourierField& operator-=(const FourierField& o) {
        if (o.order() > order()) c_.resize(static_cast<size_t>(o.order()) + 1, cplx(0.0));
        for (int n = 0; n <= o.order(); ++n) c_[static_cast<size_t>(n)] -= o.c_[static_cast<size_t>(n)];
        return *this;
    }
    FourierField& operator*=(double a) {
        for (cplx& z : c_) z *= a;
        return *this;
    }

    friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
    friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
    friend FourierField operator*(FourierField a, double s) { return a *= s; }
    friend FourierField operator*(double s, FourierField a) { return a *= s; }
    friend FourierField operator-(FourierField a) { return a *= -1.0; }

  private:
    std::vector<cplx> c_;  // c_[n] for n = 0..N
};

inline FourierField derivative(const FourierField& x) {
    FourierField d(x.order());
    for (int n = 1; n <= x.order(); ++n) d.set_coeff(n, cplx(0.0, n) * x.coeff(n));
    return d;
}

/** Hilbert transform (conjugate function). Multiplier convention
 * J e^{i n theta} = i sgn(n) e^{i n theta}, J 1 = 0, which is what the
 * principal-value kernel 1/tan((t-theta)/2) produces: J sin = cos. */
inline FourierField hilbert(const FourierField& x) {
    FourierField h(x.order());
    for (int n = 1; n <= x.order(); ++n) h.set_coeff(n, cplx(0.0, 1.0) * x.coeff(n));
    return h;
}

inline FourierField truncated(const FourierField& x, int ord) {
    FourierField t(ord);
    for (int n = 0; n <= ord; ++n) t.set_coeff(n, x.coeff(n));
    return t;
}

/** Exact pointwise product, output order Nx + Ny (no aliasing). */
inline FourierField multiply(const FourierField& x, const FourierField& y) {
    int no = x.order() + y.order();
    FourierField p(no);
    for (int m = 0; m <= no; ++m) {
        cplx s(0.0);
        for (int k = -x.order(); k <= x.order(); ++k) {
            int j = m - k;
            if (std::abs(j) > y.order()) continue;
            s += x.coeff(k) * y.coeff(j);
        }
        p.set_coeff(m, s);
    }
    return p;
}

/** Lie bracket [x,y] = x'y - xy', exact at order Nx+Ny; truncate to out_order
 * when nonnegative. */
inline FourierField bracket(const FourierField& x, const FourierField& y, int out_order = -1) {
    FourierField b = multiply(derivative(x), y) - multiply(x, derivative(y));
    return out_order < 0 ? b : truncated(b, out_order);
}

/** The pair (eta0, eta1): mean value and first negative-frequency moment. */
inline std::pair<double, cplx> moments(const FourierField& x) {
    return {x.coeff(0).real(), x.coeff(1)};
}

inline double eta0(const FourierField& x) { return x.coeff(0).real(); }
inline cplx eta1(const FourierField& x) { return x.coeff(1); }

/** x(theta - a): mode n picks up e^{-i n a}. */
inline FourierField shift(const FourierField& x, double a) {
    FourierField s(x.order());
    for (int n = 0; n <= x.order(); ++n) s.set_coeff(n, x.coeff(n) * std::polar(1.0, -n * a));
    return s;
}

enum class Subspace { Full, Vect0, D, Rot, Mob };

inline bool retains(Subspace s, int n) {
    int a = std::abs(n);
    switch (s) {
        case Subspace::Full: return true;
        case Subspace::Vect0: return a != 0;
        case Subspace::D: return a >= 2;
        case Subspace::Rot: return a == 0;
        case Subspace::Mob: return a <= 1;
    }
    return false;
}

/** Coefficient-wise complement: Vect0 <-> Rot, D <-> Mob. */
inline Subspace complement(Subspace s) {
    switch (s) {
        case Subspace::Full: return Subspace::Rot;  // unused sentinel; Full has no leak
        case Subspace::Vect0: return Subspace::Rot;
        case Subspace::D: return Subspace::Mob;
        case Subspace::Rot: return Subspace::Vect0;
        case Subspace::Mob: return Subspace::D;
    }
    return Subspace::Full;
}

inline FourierField project(const FourierField& x, Subspace s) {
    FourierField p(x.order());
    for (int n = 0; n <= x.order(); ++n)
        if (retains(s, n)) p.set_coeff(n, x.coeff(n));
    return p;
}

inline double max_abs_coeff(const FourierField& x) {
    double m = 0.0;
    for (int n = 0; n <= x.order(); ++n) m = std::max(m, std::abs(x.coeff(n)));
    return m;
}

inline bool supported_on(const FourierField& x, Subspace s, double tol = 0.0) {
    for (int n = 0; n <= x.order(); ++n)
        if (!retains(s, n) && std::abs(x.coeff(n)) > tol) return false;
    return true;
}

/** Support check up to roundoff dust relative to the field's size. */
inline bool supported_on_rel(const FourierField& x, Subspace s, double rel_tol = 1e-9) {
    return supported_on(x, s, rel_tol * (1.0 + max_abs_coeff(x)));
}

}  // namespace circleflow
