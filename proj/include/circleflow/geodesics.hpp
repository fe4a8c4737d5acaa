#pragma once

#include "errors.hpp"
#include "fourier_field.hpp"
#include "metrics.hpp"
#include "virasoro.hpp"

#include <variant>

namespace circleflow {

enum class ProblemKind {
    RiemannL2,       // Burgers: udot = 3 u u'
    SobolevRiemann,  // inertia alpha + beta n^2 (Camassa-Holm at (1,1))
    KaehlerRiemann,  // full flow of the invariant Kaehler metric (CLM type at (1,0))
    KaehlerNormal,   // horizontal flow on Vect0 with a constant rot multiplier
    WeilPetersson,   // horizontal flow on D with a mob multiplier
    VirasoroNormal,  // KdV family: udot = 3uu' + 2 l1 u' + l2 L_{mu nu} u'
};

struct Problem {
    ProblemKind kind = ProblemKind::RiemannL2;
    MetricParams params{};
    CentralParams central{};
    double lambda = 0.0;    // KaehlerNormal
    double lambda1 = 0.0;   // VirasoroNormal
    double lambda2 = 0.0;   // VirasoroNormal

    static Problem riemann_l2() { return {ProblemKind::RiemannL2}; }
    static Problem sobolev(MetricParams p) { return {ProblemKind::SobolevRiemann, p}; }
    static Problem kaehler_riemann(MetricParams p) { return {ProblemKind::KaehlerRiemann, p}; }
    static Problem kaehler_normal(MetricParams p, double lambda) {
        Problem pb{ProblemKind::KaehlerNormal, p};
        pb.lambda = lambda;
        return pb;
    }
    static Problem weil_petersson() { return {ProblemKind::WeilPetersson, weil_petersson_params}; }
    static Problem virasoro(CentralParams c, double l1, double l2) {
        Problem pb{ProblemKind::VirasoroNormal};
        pb.central = c;
        pb.lambda1 = l1;
        pb.lambda2 = l2;
        return pb;
    }

    /** Subspace carrying the state u. */
    Subspace domain() const {
        switch (kind) {
            case ProblemKind::KaehlerNormal:
            case ProblemKind::VirasoroNormal: return Subspace::Vect0;
            case ProblemKind::WeilPetersson: return Subspace::D;
            default: return Subspace::Full;
        }
    }
};

struct MobMultiplier {
    double lambda0 = 0.0;
    cplx w{};
};

struct VirMultiplier {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

using Multiplier = std::variant<std::monostate, double, MobMultiplier, VirMultiplier>;

struct GeodesicState {
    FourierField u;
    Multiplier multiplier{};
};

namespace detail {

/** Inertia of the full Kaehler-type metric on Vect S^1: a_0 = 1 (the rot part
 * carries the plain mean-value pairing), a_n = |n|(alpha + beta n^2). */
inline FourierField kaehler_extended_apply(MetricParams p, const FourierField& u) {
    FourierField m(u.order());
    m.set_coeff(0, u.coeff(0));
    for (int n = 1; n <= u.order(); ++n)
        m.set_coeff(n, n * (p.alpha + p.beta * n * n) * u.coeff(n));
    return m;
}

inline FourierField kaehler_extended_invert(MetricParams p, const FourierField& m) {
    FourierField u(m.order());
    u.set_coeff(0, m.coeff(0));
    for (int n = 1; n <= m.order(); ++n) {
        double a = n * (p.alpha + p.beta * n * n);
        if (a == 0.0) {
            if (std::abs(m.coeff(n)) > 0.0)
                throw SingularModeError(n, "kaehler inertia singular at mode n=" + std::to_string(n));
            continue;
        }
        u.set_coeff(n, m.coeff(n) / a);
    }
    return u;
}

inline FourierField multiplier_field(const Multiplier& mult, int order) {
    FourierField f(std::max(order, 1));
    if (std::holds_alternative<double>(mult)) {
        f.set_coeff(0, std::get<double>(mult));
    } else if (std::holds_alternative<MobMultiplier>(mult)) {
        const auto& mm = std::get<MobMultiplier>(mult);
        f.set_coeff(0, mm.lambda0);
        f.set_coeff(1, mm.w);
    } else if (std::holds_alternative<VirMultiplier>(mult)) {
        f.set_coeff(0, std::get<VirMultiplier>(mult).lambda1);
    }
    return f;
}

}  // namespace detail

/** Full L^2 momentum A u + lambda of a state, the quantity evolving by the
 * Euler-Arnold equation mdot = ad_u^T(m). */
inline FourierField momentum_field(const Problem& pb, const GeodesicState& st) {
    switch (pb.kind) {
        case ProblemKind::RiemannL2: return st.u;
        case ProblemKind::SobolevRiemann:
            return inertia_apply(InertiaKind::sobolev(pb.params), st.u);
        case ProblemKind::KaehlerRiemann: return detail::kaehler_extended_apply(pb.params, st.u);
        case ProblemKind::KaehlerNormal: {
            FourierField m = inertia_apply(InertiaKind::kaehler(pb.params), st.u);
            m.set_coeff(0, pb.lambda);
            return m;
        }
        case ProblemKind::WeilPetersson: {
            FourierField m = inertia_apply(InertiaKind::kaehler(pb.params, Subspace::D), st.u);
            return m + detail::multiplier_field(st.multiplier, m.order());
        }
        case ProblemKind::VirasoroNormal:
            return st.u + FourierField::constant(pb.lambda1);
    }
    return st.u;
}

/** Central component of the momentum in the extended algebra (zero for all
 * problems on Diff S^1). */
inline double momentum_central(const Problem& pb, const GeodesicState&) {
    return pb.kind == ProblemKind::VirasoroNormal ? pb.lambda2 : 0.0;
}

/** Right-hand side of the normal geodesic system
 *   udot = pr_h A^{-1} ad_u^T(A u + lambda),  lambdadot = pr_{h^perp} ad_u^T(...),
 * specialized per problem. Products are exact at order 2N and truncated to N. */
inline GeodesicState rhs(const Problem& pb, const GeodesicState& st) {
    const FourierField& u = st.u;
    int N = u.order();
    switch (pb.kind) {
        case ProblemKind::RiemannL2:
            return {truncated(ad_transpose(u, u), N), std::monostate{}};
        case ProblemKind::SobolevRiemann: {
            InertiaKind A = InertiaKind::sobolev(pb.params);
            FourierField m = inertia_apply(A, u);
            return {inertia_invert(A, truncated(ad_transpose(u, m), N)), std::monostate{}};
        }
        case ProblemKind::KaehlerRiemann: {
            FourierField m = detail::kaehler_extended_apply(pb.params, u);
            FourierField r = truncated(ad_transpose(u, m), N);
            return {detail::kaehler_extended_invert(pb.params, r), std::monostate{}};
        }
        case ProblemKind::KaehlerNormal: {
            InertiaKind A = InertiaKind::kaehler(pb.params);
            FourierField m = inertia_apply(A, u) + FourierField::constant(pb.lambda);
            FourierField r = truncated(ad_transpose(u, m), N);
            return {inertia_invert(A, project(r, Subspace::Vect0)), 0.0};
        }
        case ProblemKind::WeilPetersson: {
            const auto& mm = std::get<MobMultiplier>(st.multiplier);
            InertiaKind A = InertiaKind::kaehler(pb.params, Subspace::D);
            FourierField m = inertia_apply(A, u) + detail::multiplier_field(st.multiplier, N);
            FourierField r = truncated(ad_transpose(u, m), N);
            FourierField du = inertia_invert(A, project(r, Subspace::D));
            // Closed-form mob evolution; the projected RHS reproduces it and is
            // cross-checked in the per-sample diagnostics.
            MobMultiplier dmm{0.0, 3.0 * cplx(0.0, 1.0) * std::conj(mm.w) * u.coeff(2)};
            return {std::move(du), dmm};
        }
        case ProblemKind::VirasoroNormal: {
            FourierField r = ad_transpose(u, u);
            FourierField up = derivative(u);
            r += 2.0 * pb.lambda1 * up;
            r += pb.lambda2 * apply_L(MetricParams{pb.central.mu, pb.central.nu}, up);
            return {project(truncated(r, N), Subspace::Vect0), VirMultiplier{}};
        }
    }
    throw DomainError("rhs: unknown problem kind");
}

/** Kinetic energy (1/2) h(u, u) in the problem's metric. */
inline double energy(const Problem& pb, const GeodesicState& st) {
    switch (pb.kind) {
        case ProblemKind::RiemannL2:
        case ProblemKind::VirasoroNormal: return 0.5 * l2_inner(st.u, st.u);
        case ProblemKind::KaehlerRiemann: return 0.5 * inner(pb.params, st.u, st.u);
        case ProblemKind::SobolevRiemann:
            return 0.5 * l2_inner(inertia_apply(InertiaKind::sobolev(pb.params), st.u), st.u);
        case ProblemKind::KaehlerNormal:
            return 0.5 * l2_inner(inertia_apply(InertiaKind::kaehler(pb.params), st.u), st.u);
        case ProblemKind::WeilPetersson:
            return 0.5 * l2_inner(inertia_apply(InertiaKind::kaehler(pb.params, Subspace::D), st.u), st.u);
    }
    return 0.0;
}

struct Diagnostics {
    double t = 0.0;
    double energy = 0.0;
    double eta0 = 0.0;
    cplx eta1{};
    double subspace_leak = 0.0;
    Multiplier multiplier{};
    /** Weil-Petersson only: |mode-1 of projected RHS - 3 i conj(w) c_2|. */
    double wp_closure_residual = 0.0;
};

struct Trajectory {
    Problem problem{};
    double dt = 0.0;
    std::vector<double> t;
    std::vector<GeodesicState> states;
    std::vector<Diagnostics> diag;

    int size() const { return static_cast<int>(states.size()); }
};

namespace detail {

inline Multiplier mult_axpy(const Multiplier& a, double s, const Multiplier& b) {
    if (std::holds_alternative<double>(a))
        return std::get<double>(a) + s * std::get<double>(b);
    if (std::holds_alternative<MobMultiplier>(a)) {
        const auto& x = std::get<MobMultiplier>(a);
        const auto& y = std::get<MobMultiplier>(b);
        return MobMultiplier{x.lambda0 + s * y.lambda0, x.w + s * y.w};
    }
    if (std::holds_alternative<VirMultiplier>(a)) {
        const auto& x = std::get<VirMultiplier>(a);
        const auto& y = std::get<VirMultiplier>(b);
        return VirMultiplier{x.lambda1 + s * y.lambda1, x.lambda2 + s * y.lambda2};
    }
    return std::monostate{};
}

inline GeodesicState state_axpy(const GeodesicState& a, double s, const GeodesicState& b) {
    return {a.u + s * b.u, mult_axpy(a.multiplier, s, b.multiplier)};
}

inline Diagnostics sample_diagnostics(const Problem& pb, const GeodesicState& st, double t) {
    Diagnostics d;
    d.t = t;
    d.energy = energy(pb, st);
    d.eta0 = eta0(st.u);
    d.eta1 = eta1(st.u);
    d.multiplier = st.multiplier;
    if (pb.domain() != Subspace::Full)
        d.subspace_leak = l2_norm(project(st.u, complement(pb.domain())));
    if (pb.kind == ProblemKind::WeilPetersson) {
        const auto& mm = std::get<MobMultiplier>(st.multiplier);
        FourierField m = inertia_apply(InertiaKind::kaehler(pb.params, Subspace::D), st.u) +
                         multiplier_field(st.multiplier, st.u.order());
        FourierField r = truncated(ad_transpose(st.u, m), st.u.order());
        cplx wdot_proj = project(r, Subspace::Mob).coeff(1);
        cplx wdot_closed = 3.0 * cplx(0.0, 1.0) * std::conj(mm.w) * st.u.coeff(2);
        d.wp_closure_residual = std::abs(wdot_proj - wdot_closed);
    }
    return d;
}

/** Exact flow of the linear (dispersive) part of the Virasoro normal system:
 * mode n rotates with frequency n (2 lambda1 - lambda2 (mu + nu n^2)). */
inline FourierField vir_linear_flow(const Problem& pb, const FourierField& x, double t) {
    FourierField y(x.order());
    for (int n = 0; n <= x.order(); ++n) {
        double w = n * (2.0 * pb.lambda1 - pb.lambda2 * (pb.central.mu + pb.central.nu * n * n));
        y.set_coeff(n, x.coeff(n) * std::polar(1.0, w * t));
    }
    return y;
}

inline FourierField vir_nonlinear(const FourierField& u) {
    return project(truncated(ad_transpose(u, u), u.order()), Subspace::Vect0);
}

/** One classical Lawson (integrating-factor RK4) step for the Virasoro normal
 * flow. The stiff linear dispersion is integrated exactly, so the step is
 * stable at any order; only the quadratic term sees the RK4 truncation. */
inline FourierField vir_lawson_step(const Problem& pb, const FourierField& u, double dt) {
    auto half = [&](const FourierField& x) { return vir_linear_flow(pb, x, 0.5 * dt); };
    auto full = [&](const FourierField& x) { return vir_linear_flow(pb, x, dt); };
    FourierField n1 = vir_nonlinear(u);
    FourierField uh = half(u);
    FourierField a = half(u + 0.5 * dt * n1);
    FourierField n2 = vir_nonlinear(a);
    FourierField b = uh + 0.5 * dt * n2;
    FourierField n3 = vir_nonlinear(b);
    FourierField c = full(u) + dt * half(n3);
    FourierField n4 = vir_nonlinear(c);
    return full(u + (dt / 6.0) * n1) + half((dt / 3.0) * (n2 + n3)) + (dt / 6.0) * n4;
}

inline Multiplier default_multiplier(const Problem& pb) {
    switch (pb.kind) {
        case ProblemKind::KaehlerNormal: return pb.lambda;
        case ProblemKind::WeilPetersson: return MobMultiplier{};
        case ProblemKind::VirasoroNormal: return VirMultiplier{pb.lambda1, pb.lambda2};
        default: return std::monostate{};
    }
}

}  // namespace detail

/** Classical RK4 on the coefficient vector with per-step diagnostics. Aborts
 * with the last valid time when the state stops being finite; a partially
 * built trajectory is handed back through `partial` when provided. */
inline Trajectory integrate(const Problem& pb, GeodesicState initial, double T, double dt,
                            Trajectory* partial = nullptr) {
    if (dt <= 0.0 || T < dt) throw DomainError("integrate: need dt > 0 and T >= dt");
    if (!supported_on(initial.u, pb.domain(), 1e-10))
        throw DomainError("integrate: initial field violates the problem subspace");
    if (std::holds_alternative<std::monostate>(initial.multiplier) && pb.domain() != Subspace::Full)
        initial.multiplier = detail::default_multiplier(pb);
    if (pb.kind == ProblemKind::KaehlerNormal && !pb.params.positive_definite())
        throw DomainError("integrate: Kaehler normal flow needs a positive-definite metric");

    int steps = static_cast<int>(std::llround(T / dt));
    Trajectory traj;
    traj.problem = pb;
    traj.dt = dt;
    traj.t.reserve(static_cast<size_t>(steps) + 1);
    traj.states.reserve(static_cast<size_t>(steps) + 1);
    traj.diag.reserve(static_cast<size_t>(steps) + 1);

    GeodesicState st = std::move(initial);
    auto record = [&](double t) {
        traj.t.push_back(t);
        traj.diag.push_back(detail::sample_diagnostics(pb, st, t));
        traj.states.push_back(st);
    };
    record(0.0);
    for (int s = 0; s < steps; ++s) {
        double t = s * dt;
        GeodesicState next;
        if (pb.kind == ProblemKind::VirasoroNormal) {
            // integrating-factor steps: the n^3 dispersion is too stiff for
            // plain RK4 at practical orders. Substeps keep the coupling of
            // the quadratic term to the fast phases resolved at coarse dt.
            int sub = std::max(1, static_cast<int>(std::ceil(dt / 2.5e-4)));
            FourierField u = st.u;
            for (int i = 0; i < sub; ++i) u = detail::vir_lawson_step(pb, u, dt / sub);
            next = {std::move(u), st.multiplier};
        } else {
            GeodesicState k1 = rhs(pb, st);
            GeodesicState k2 = rhs(pb, detail::state_axpy(st, 0.5 * dt, k1));
            GeodesicState k3 = rhs(pb, detail::state_axpy(st, 0.5 * dt, k2));
            GeodesicState k4 = rhs(pb, detail::state_axpy(st, dt, k3));
            next = detail::state_axpy(st, dt / 6.0, k1);
            next = detail::state_axpy(next, dt / 3.0, k2);
            next = detail::state_axpy(next, dt / 3.0, k3);
            next = detail::state_axpy(next, dt / 6.0, k4);
        }
        if (!next.u.finite()) {
            if (partial) *partial = std::move(traj);
            throw BlowUpError(t, "integrate: blow-up, last valid time t=" + std::to_string(t));
        }
        st = std::move(next);
        record((s + 1) * dt);
    }
    return traj;
}

/** Rotation-shift factorization: from a full Riemannian Kaehler trajectory,
 * produce the horizontal normal-geodesic trajectory
 *   u_sR(t, theta) = u_R(t, theta - lambda t) - lambda,  lambda = eta0(u_R(0)),
 * carried as a constant rot multiplier. */
inline Trajectory rotate_shift(const Trajectory& in) {
    if (in.problem.kind != ProblemKind::KaehlerRiemann)
        throw DomainError("rotate_shift: input must come from a KaehlerRiemann integration");
    double lambda = in.states.empty() ? 0.0 : eta0(in.states.front().u);
    Trajectory out;
    out.problem = Problem::kaehler_normal(in.problem.params, lambda);
    out.dt = in.dt;
    out.t = in.t;
    for (int k = 0; k < in.size(); ++k) {
        FourierField us = shift(in.states[static_cast<size_t>(k)].u, lambda * in.t[static_cast<size_t>(k)]);
        us.set_coeff(0, 0.0);  // horizontal by construction: eta0(u_R) - lambda up to drift
        GeodesicState st{std::move(us), lambda};
        out.diag.push_back(detail::sample_diagnostics(out.problem, st, in.t[static_cast<size_t>(k)]));
        out.states.push_back(std::move(st));
    }
    return out;
}

/** Summary report over a trajectory. */
struct Report {
    double initial_energy = 0.0;
    double max_rel_energy_drift = 0.0;
    double total_energy = 0.0;  // trapezoidal int E dt
    double max_subspace_leak = 0.0;
    double eta0_drift = 0.0;
    double lambda0_drift = 0.0;
    double max_wp_closure_residual = 0.0;
};

inline Report diagnostics(const Trajectory& traj) {
    Report r;
    if (traj.diag.empty()) return r;
    double e0 = traj.diag.front().energy;
    double scale = std::max(std::abs(e0), 1e-300);
    double lam0_first = 0.0;
    if (std::holds_alternative<MobMultiplier>(traj.diag.front().multiplier))
        lam0_first = std::get<MobMultiplier>(traj.diag.front().multiplier).lambda0;
    r.initial_energy = e0;
    for (int k = 0; k < static_cast<int>(traj.diag.size()); ++k) {
        const Diagnostics& d = traj.diag[static_cast<size_t>(k)];
        r.max_rel_energy_drift = std::max(r.max_rel_energy_drift, std::abs(d.energy - e0) / scale);
        r.max_subspace_leak = std::max(r.max_subspace_leak, d.subspace_leak);
        r.eta0_drift = std::max(r.eta0_drift, std::abs(d.eta0 - traj.diag.front().eta0));
        r.max_wp_closure_residual = std::max(r.max_wp_closure_residual, d.wp_closure_residual);
        if (std::holds_alternative<MobMultiplier>(d.multiplier))
            r.lambda0_drift = std::max(
                r.lambda0_drift, std::abs(std::get<MobMultiplier>(d.multiplier).lambda0 - lam0_first));
        if (k > 0)
            r.total_energy += 0.5 * traj.dt * (d.energy + traj.diag[static_cast<size_t>(k - 1)].energy);
    }
    return r;
}

}  // namespace circleflow
