#pragma once

#include "diffeo.hpp"
#include "geodesics.hpp"
#include "metrics.hpp"
#include "oracles.hpp"
#include "random_fields.hpp"
#include "virasoro.hpp"

#include <string>
#include <vector>

namespace circleflow::selfcheck {

struct CheckResult {
    std::string name;
    double metric = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/** Spectral Hilbert multiplier against principal-value kernel quadrature for
 * modes n = 1..8 on a 4096-node symmetric grid. */
inline CheckResult check_hilbert_kernel() {
    double err = 0.0;
    for (int n = 1; n <= 8; ++n) {
        FourierField mode(n);
        mode.set_coeff(n, cplx(0.3, -0.2));
        FourierField jm = hilbert(mode);
        for (int j = 0; j < 16; ++j) {
            double th = two_pi * j / 16;
            double pv = oracles::hilbert_pv_quadrature([&](double t) { return mode.evaluate(t); }, th);
            err = std::max(err, std::abs(pv - jm.evaluate(th)));
        }
    }
    return {"hilbert-kernel", err, 1e-6, err < 1e-6};
}

/** <ad_x^T y, z> = <y, [x,z]> and the Virasoro counterpart, against a
 * quadrature route for the pairing. */
inline CheckResult check_adjointness() {
    std::mt19937_64 rng(20240811);
    double err = 0.0;
    CentralParams cp{0.4, 1.3};
    for (int trial = 0; trial < 20; ++trial) {
        FourierField x = random_field(rng, 8, 0.3);
        FourierField y = random_field(rng, 8, 0.3);
        FourierField z = random_field(rng, 8, 0.3);
        FourierField at = ad_transpose(x, y);
        FourierField br = bracket(x, z);
        double lhs = oracles::quadrature_l2([&](double t) { return at.evaluate(t); },
                                            [&](double t) { return z.evaluate(t); });
        double rhs = oracles::quadrature_l2([&](double t) { return y.evaluate(t); },
                                            [&](double t) { return br.evaluate(t); });
        err = std::max(err, std::abs(lhs - rhs));

        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        VirVector v{x, unif(rng)}, w{y, unif(rng)}, zz{z, unif(rng)};
        double vl = vir_inner(vir_ad_transpose(cp, v, w), zz);
        double vr = vir_inner(w, vir_bracket(cp, v, zz));
        err = std::max(err, std::abs(vl - vr));
    }
    return {"adjointness", err, 1e-10, err < 1e-10};
}

/** tau_apply o tau_invert = identity at dt = 1e-3 on order-8 data. */
inline CheckResult check_tau_roundtrip() {
    std::mt19937_64 rng(77);
    double dt = 1e-3;
    int ns = 301;  // T = 0.3 keeps runtime small
    // the error is dominated by spectral spreading under Ad_gamma, so the
    // working order must be comfortably above the data order
    int order = 8, work = 48;
    FourierField ua = random_field(rng, order, 0.15);
    FourierField ub = random_field(rng, order, 0.15);
    FourierField ya = random_field(rng, order, 0.2);
    FourierField yb = random_field(rng, order, 0.2);
    std::vector<FourierField> u, y;
    for (int k = 0; k < ns; ++k) {
        double t = k * dt;
        u.push_back(truncated(ua + std::sin(t) * ub, work));
        y.push_back(truncated(ya + std::cos(2.0 * t) * yb, work));
    }
    auto x = tau_invert(u, y, dt, work);
    auto yy = tau_apply(u, x, dt, work);
    double err = 0.0;
    for (int k = 0; k < ns; ++k) err = std::max(err, max_abs_coeff(yy[static_cast<size_t>(k)] - y[static_cast<size_t>(k)]));
    return {"tau-roundtrip", err, 1e-6, err < 1e-6};
}

/** Associativity of the Virasoro-Bott central coordinate on random smooth
 * triples, and vanishing cocycles on rotation pairs. */
inline CheckResult check_cocycle_associativity() {
    std::mt19937_64 rng(5150);
    int m = 512;
    CentralParams cp{0.7, 1.0};
    double err = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        VirasoroElement g1{Diffeo(random_displacement(rng, m, 0.2)), 0.1};
        VirasoroElement g2{Diffeo(random_displacement(rng, m, 0.2)), -0.2};
        VirasoroElement g3{Diffeo(random_displacement(rng, m, 0.2)), 0.3};
        VirasoroElement lhs = vir_multiply(cp, vir_multiply(cp, g1, g2), g3);
        VirasoroElement rhs = vir_multiply(cp, g1, vir_multiply(cp, g2, g3));
        err = std::max(err, std::abs(lhs.b - rhs.b));
    }
    Diffeo ra = Diffeo::rotation(m, 0.4), rb = Diffeo::rotation(m, -1.1);
    err = std::max(err, 1e4 * std::abs(cocycle_A(ra, rb)));  // rotation cocycles are ~0
    err = std::max(err, 1e4 * std::abs(cocycle_B(ra, rb)));
    return {"cocycle-associativity", err, 1e-8, err < 1e-8};
}

/** Rotation-shift factorization: the shifted Riemannian flow satisfies the
 * normal geodesic RHS. Time derivative taken analytically from the Riemannian
 * RHS, so only trajectory error enters. */
inline CheckResult check_rotate_shift() {
    MetricParams p{1.0, 0.0};
    FourierField u0(8);
    u0.set_coeff(0, 0.4);
    u0.set_coeff(1, cplx(0.08, -0.03));
    u0.set_coeff(2, cplx(-0.05, 0.02));
    u0.set_coeff(3, cplx(0.02, 0.01));
    Problem pr = Problem::kaehler_riemann(p);
    Trajectory tr = integrate(pr, {u0, {}}, 0.5, 1e-3);
    Trajectory sh = rotate_shift(tr);
    double lambda = eta0(u0);
    Problem pn = Problem::kaehler_normal(p, lambda);
    double err = 0.0;
    for (int k = 0; k < tr.size(); k += 50) {
        const FourierField& ur = tr.states[static_cast<size_t>(k)].u;
        double t = tr.t[static_cast<size_t>(k)];
        FourierField dur = rhs(pr, tr.states[static_cast<size_t>(k)]).u;
        FourierField dus = shift(dur - lambda * derivative(ur), lambda * t);
        dus.set_coeff(0, 0.0);
        FourierField want = rhs(pn, sh.states[static_cast<size_t>(k)]).u;
        err = std::max(err, max_abs_coeff(dus - want));
    }
    return {"rotate-shift", err, 1e-6, err < 1e-6};
}

inline std::vector<CheckResult> run_all(const std::string& filter = "") {
    std::vector<CheckResult> out;
    auto add = [&](CheckResult r) {
        if (filter.empty() || r.name.find(filter) != std::string::npos) out.push_back(std::move(r));
    };
    if (filter.empty() || std::string("hilbert-kernel").find(filter) != std::string::npos)
        add(check_hilbert_kernel());
    if (filter.empty() || std::string("adjointness").find(filter) != std::string::npos)
        add(check_adjointness());
    if (filter.empty() || std::string("tau-roundtrip").find(filter) != std::string::npos)
        add(check_tau_roundtrip());
    if (filter.empty() || std::string("cocycle-associativity").find(filter) != std::string::npos)
        add(check_cocycle_associativity());
    if (filter.empty() || std::string("rotate-shift").find(filter) != std::string::npos)
        add(check_rotate_shift());
    return out;
}

}  // namespace circleflow::selfcheck
