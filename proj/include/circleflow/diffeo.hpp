#pragma once

#include "errors.hpp"
#include "fourier_field.hpp"
#include "metrics.hpp"

#include <algorithm>
#include <functional>

namespace circleflow {

namespace detail {

/** Trigonometric interpolant of real samples on the uniform periodic grid
 * theta_j = 2 pi j / m. Handles both parities of m (the Nyquist mode of an
 * even grid enters with weight one as a pure cosine). */
class TrigInterp {
  public:
    TrigInterp() = default;
    explicit TrigInterp(const std::vector<double>& v) {
        int m = static_cast<int>(v.size());
        int kmax = m / 2;
        c_.resize(static_cast<size_t>(kmax) + 1);
        for (int n = 0; n <= kmax; ++n) {
            cplx s(0.0);
            for (int j = 0; j < m; ++j) s += v[static_cast<size_t>(j)] * std::polar(1.0, -two_pi * n * j / m);
            c_[static_cast<size_t>(n)] = s / static_cast<double>(m);
        }
        even_ = (m % 2 == 0);
    }

    double value(double theta) const {
        double s = 0.0;
        int kmax = static_cast<int>(c_.size()) - 1;
        cplx e = std::polar(1.0, theta), p(1.0);
        for (int n = 0; n <= kmax; ++n) {
            s += weight(n) * (c_[static_cast<size_t>(n)] * p).real();
            p *= e;
        }
        return s;
    }

    double derivative(double theta) const {
        double s = 0.0;
        int kmax = static_cast<int>(c_.size()) - 1;
        cplx e = std::polar(1.0, theta), p(1.0);
        for (int n = 0; n <= kmax; ++n) {
            s += weight(n) * (cplx(0.0, n) * c_[static_cast<size_t>(n)] * p).real();
            p *= e;
        }
        return s;
    }

  private:
    double weight(int n) const {
        int kmax = static_cast<int>(c_.size()) - 1;
        return (n == 0 || (even_ && n == kmax)) ? 1.0 : 2.0;
    }
    std::vector<cplx> c_;
    bool even_ = false;
};

/** Spectral derivative of grid samples, returned on the same grid. */
inline std::vector<double> spectral_derivative(const std::vector<double>& v) {
    TrigInterp t(v);
    int m = static_cast<int>(v.size());
    std::vector<double> d(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) d[static_cast<size_t>(j)] = t.derivative(two_pi * j / m);
    return d;
}

}  // namespace detail

/** Orientation-preserving circle diffeomorphism, stored as identity plus a
 * smooth periodic displacement on a uniform grid: gamma(theta_j) = theta_j + f_j.
 * The universal-cover convention gamma(theta + 2 pi) = gamma(theta) + 2 pi is
 * built in. */
class Diffeo {
  public:
    explicit Diffeo(std::vector<double> displacement)
        : disp_(std::move(displacement)), interp_(disp_) {}

    static Diffeo identity(int m) { return Diffeo(std::vector<double>(static_cast<size_t>(m), 0.0)); }
    static Diffeo rotation(int m, double a) { return Diffeo(std::vector<double>(static_cast<size_t>(m), a)); }

    /** Displacement prescribed by a Fourier field sampled on an m-point grid. */
    static Diffeo from_field(const FourierField& f, int m) { return Diffeo(f.sample(m)); }

    int grid_size() const { return static_cast<int>(disp_.size()); }
    const std::vector<double>& displacement() const { return disp_; }

    double node(int j) const { return two_pi * j / grid_size(); }

    double value(double theta) const { return theta + interp_.value(theta); }
    double derivative(double theta) const { return 1.0 + interp_.derivative(theta); }

    /** gamma' > 0 at every node. */
    bool monotone() const {
        for (int j = 0; j < grid_size(); ++j)
            if (derivative(node(j)) <= 0.0) return false;
        return true;
    }

    /** Solve gamma(theta) = y on the monotone lift: safeguarded Newton with a
     * bisection fallback, tolerance 1e-12. */
    double invert_point(double y) const {
        double fmax = 0.0;
        for (double f : disp_) fmax = std::max(fmax, std::abs(f));
        double lo = y - fmax - 0.5, hi = y + fmax + 0.5;
        auto g = [&](double t) { return value(t) - y; };
        if (g(lo) > 0.0 || g(hi) < 0.0)
            throw DomainError("invert_point: no bracket (monotonicity violated)");
        double t = y - interp_.value(y);  // first-order guess
        t = std::clamp(t, lo, hi);
        for (int it = 0; it < 100; ++it) {
            double gv = g(t);
            if (std::abs(gv) < 1e-12) return t;
            (gv > 0.0 ? hi : lo) = t;
            double dg = derivative(t);
            double tn = (dg > 0.0) ? t - gv / dg : lo;
            if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
            t = tn;
        }
        return t;
    }

    /** this composed after other: theta -> this(other(theta)). */
    Diffeo compose(const Diffeo& other) const {
        int m = grid_size();
        if (other.grid_size() != m) throw DomainError("compose: incompatible grids");
        std::vector<double> d(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            double inner = other.value(node(j));
            d[static_cast<size_t>(j)] = inner + interp_.value(inner) - node(j);
        }
        return Diffeo(std::move(d));
    }

    Diffeo inverse() const {
        if (!monotone()) throw DomainError("inverse: diffeomorphism not monotone");
        int m = grid_size();
        std::vector<double> d(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) d[static_cast<size_t>(j)] = invert_point(node(j)) - node(j);
        return Diffeo(std::move(d));
    }

  private:
    std::vector<double> disp_;
    detail::TrigInterp interp_;
};

/** (Ad_phi x)(theta) = phi'(phi^{-1}(theta)) x(phi^{-1}(theta)), sampled on
 * the grid and re-expanded at the order of x. */
inline FourierField adjoint_action(const Diffeo& phi, const FourierField& x) {
    if (!phi.monotone()) throw DomainError("adjoint_action: diffeomorphism not monotone");
    int m = phi.grid_size();
    if (m < 2 * x.order() + 1) throw DomainError("adjoint_action: grid too coarse for field order");
    std::vector<double> v(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        double pre = phi.invert_point(phi.node(j));
        v[static_cast<size_t>(j)] = phi.derivative(pre) * x.evaluate(pre);
    }
    return FourierField::from_samples(v, x.order());
}

/** Uniformly time-sampled path of diffeomorphisms on a fixed grid, t_0 = 0. */
struct GroupPath {
    double dt = 0.0;
    std::vector<Diffeo> samples;

    int size() const { return static_cast<int>(samples.size()); }
    int grid_size() const { return samples.empty() ? 0 : samples.front().grid_size(); }
};

/** Left logarithmic derivative u(t_k) = d_t gamma / gamma' with centered time
 * differences (second-order one-sided stencils at the endpoints), re-expanded
 * as fields of the requested order. */
inline std::vector<FourierField> log_derivative(const GroupPath& path, int order) {
    int ns = path.size();
    if (ns < 3) throw DomainError("log_derivative: need at least 3 samples");
    int m = path.grid_size();
    std::vector<FourierField> u;
    u.reserve(static_cast<size_t>(ns));
    for (int k = 0; k < ns; ++k) {
        const auto& fk = path.samples[static_cast<size_t>(k)];
        if (!fk.monotone()) throw DomainError("log_derivative: path leaves the diffeomorphism group");
        std::vector<double> gdot(static_cast<size_t>(m));
        auto d = [&](int i, int j) {
            return path.samples[static_cast<size_t>(i)].displacement()[static_cast<size_t>(j)];
        };
        for (int j = 0; j < m; ++j) {
            double td;
            if (k == 0)
                td = (-3.0 * d(0, j) + 4.0 * d(1, j) - d(2, j)) / (2.0 * path.dt);
            else if (k == ns - 1)
                td = (3.0 * d(ns - 1, j) - 4.0 * d(ns - 2, j) + d(ns - 3, j)) / (2.0 * path.dt);
            else
                td = (d(k + 1, j) - d(k - 1, j)) / (2.0 * path.dt);
            gdot[static_cast<size_t>(j)] = td / fk.derivative(fk.node(j));
        }
        u.push_back(FourierField::from_samples(gdot, order));
    }
    return u;
}

/** Integrate d_t gamma = gamma' u(t) nodewise with classical RK4 and spectral
 * theta-derivatives, asserting monotonicity after every step. */
inline GroupPath reconstruct_flow(const std::function<FourierField(double)>& u, const Diffeo& gamma0,
                                  double T, double dt) {
    if (dt <= 0.0) throw DomainError("reconstruct_flow: dt must be positive");
    int m = gamma0.grid_size();
    int steps = static_cast<int>(std::llround(T / dt));
    auto deriv = [&](const std::vector<double>& f, double t) {
        std::vector<double> fp = detail::spectral_derivative(f);
        FourierField ut = u(t);
        std::vector<double> g(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j)
            g[static_cast<size_t>(j)] = (1.0 + fp[static_cast<size_t>(j)]) * ut.evaluate(two_pi * j / m);
        return g;
    };
    GroupPath path;
    path.dt = dt;
    path.samples.reserve(static_cast<size_t>(steps) + 1);
    path.samples.push_back(gamma0);
    std::vector<double> f = gamma0.displacement();
    for (int s = 0; s < steps; ++s) {
        double t = s * dt;
        auto k1 = deriv(f, t);
        std::vector<double> tmp(f);
        for (int j = 0; j < m; ++j) tmp[static_cast<size_t>(j)] = f[static_cast<size_t>(j)] + 0.5 * dt * k1[static_cast<size_t>(j)];
        auto k2 = deriv(tmp, t + 0.5 * dt);
        for (int j = 0; j < m; ++j) tmp[static_cast<size_t>(j)] = f[static_cast<size_t>(j)] + 0.5 * dt * k2[static_cast<size_t>(j)];
        auto k3 = deriv(tmp, t + 0.5 * dt);
        for (int j = 0; j < m; ++j) tmp[static_cast<size_t>(j)] = f[static_cast<size_t>(j)] + dt * k3[static_cast<size_t>(j)];
        auto k4 = deriv(tmp, t + dt);
        for (int j = 0; j < m; ++j)
            f[static_cast<size_t>(j)] += dt / 6.0 *
                (k1[static_cast<size_t>(j)] + 2.0 * k2[static_cast<size_t>(j)] + 2.0 * k3[static_cast<size_t>(j)] + k4[static_cast<size_t>(j)]);
        Diffeo next(f);
        if (!next.monotone())
            throw BlowUpError(t, "reconstruct_flow: characteristics crossed at t=" + std::to_string(t + dt));
        path.samples.push_back(std::move(next));
    }
    return path;
}

namespace detail {

/** Cubic Lagrange interpolation of time-sampled fields at an off-sample time. */
inline FourierField interp_fields(const std::vector<FourierField>& u, double dt, double t) {
    int ns = static_cast<int>(u.size());
    double s = t / dt;
    int k = std::clamp(static_cast<int>(std::floor(s)), 0, ns - 2);
    if (ns < 4) {
        double w = s - k;
        return (1.0 - w) * u[static_cast<size_t>(k)] + w * u[static_cast<size_t>(k + 1)];
    }
    int k0 = std::clamp(k - 1, 0, ns - 4);
    FourierField r(u.front().order());
    for (int i = 0; i < 4; ++i) {
        double w = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != i) w *= (s - (k0 + j)) / static_cast<double>(i - j);
        r += w * u[static_cast<size_t>(k0 + i)];
    }
    return r;
}

}  // namespace detail

/** Flow reconstruction from fields sampled on the integration time grid. */
inline GroupPath reconstruct_flow(const std::vector<FourierField>& u, const Diffeo& gamma0, double dt) {
    int ns = static_cast<int>(u.size());
    double T = (ns - 1) * dt;
    return reconstruct_flow([&](double t) { return detail::interp_fields(u, dt, t); }, gamma0, T, dt);
}

/** tau_u x = xdot + [u, x] on a common time grid; xdot by centered differences. */
inline std::vector<FourierField> tau_apply(const std::vector<FourierField>& u,
                                           const std::vector<FourierField>& x, double dt,
                                           int out_order) {
    int ns = static_cast<int>(u.size());
    if (static_cast<int>(x.size()) != ns) throw DomainError("tau_apply: time grids differ");
    std::vector<FourierField> y;
    y.reserve(static_cast<size_t>(ns));
    for (int k = 0; k < ns; ++k) {
        FourierField xdot(0);
        if (k == 0)
            xdot = (-3.0 * x[0] + 4.0 * x[1] - x[2]) * (1.0 / (2.0 * dt));
        else if (k == ns - 1)
            xdot = (3.0 * x[static_cast<size_t>(ns - 1)] - 4.0 * x[static_cast<size_t>(ns - 2)] + x[static_cast<size_t>(ns - 3)]) * (1.0 / (2.0 * dt));
        else
            xdot = (x[static_cast<size_t>(k + 1)] - x[static_cast<size_t>(k - 1)]) * (1.0 / (2.0 * dt));
        y.push_back(truncated(xdot + bracket(u[static_cast<size_t>(k)], x[static_cast<size_t>(k)]), out_order));
    }
    return y;
}

/** Inverse of tau_u with x(0) = 0:
 *   x(t) = Ad_{gamma(t)^{-1}} int_0^t Ad_{gamma(s)} y(s) ds,
 * gamma the flow of u from the identity, trapezoidal time quadrature. */
inline std::vector<FourierField> tau_invert(const std::vector<FourierField>& u,
                                            const std::vector<FourierField>& y, double dt,
                                            int out_order) {
    int ns = static_cast<int>(u.size());
    if (static_cast<int>(y.size()) != ns) throw DomainError("tau_invert: time grids differ");
    int m = 4 * out_order + 1;
    GroupPath gamma = reconstruct_flow(u, Diffeo::identity(m), dt);
    std::vector<FourierField> x;
    x.reserve(static_cast<size_t>(ns));
    FourierField integral(out_order);
    FourierField prev(out_order);
    for (int k = 0; k < ns; ++k) {
        FourierField s = adjoint_action(gamma.samples[static_cast<size_t>(k)], truncated(y[static_cast<size_t>(k)], out_order));
        if (k > 0) integral += 0.5 * dt * (prev + s);
        prev = s;
        x.push_back(adjoint_action(gamma.samples[static_cast<size_t>(k)].inverse(), integral));
    }
    return x;
}

/** Max over time of the L^2 norm of the log-derivative component outside the
 * given subspace. */
inline double horizontality_residual(const GroupPath& path, Subspace s, int order) {
    if (s == Subspace::Full) return 0.0;
    auto u = log_derivative(path, order);
    double r = 0.0;
    for (const auto& uk : u) r = std::max(r, l2_norm(project(uk, complement(s))));
    return r;
}

}  // namespace circleflow
