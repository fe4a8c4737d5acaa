#include <circleflow/geodesics.hpp>
#include <circleflow/oracles.hpp>
#include <circleflow/random_fields.hpp>

#include <doctest.h>

using namespace circleflow;

namespace {

FourierField sin_field(int n, double amp, int order = -1) {
    FourierField f(order < 0 ? n : order);
    f.set_coeff(n, cplx(0.0, -0.5 * amp));
    return f;
}

FourierField cos_field(int n, double amp, int order = -1) {
    FourierField f(order < 0 ? n : order);
    f.set_coeff(n, cplx(0.5 * amp, 0.0));
    return f;
}

}  // namespace

TEST_CASE("rhs examples") {
    // Burgers: constants are stationary
    FourierField c = FourierField::constant(0.7, 4);
    CHECK(max_abs_coeff(rhs(Problem::riemann_l2(), {c, {}}).u) < 1e-15);

    // Kaehler normal flow of eps sin 2theta at lambda = 0:
    //   udot = (3/2) eps^2 sin 4theta
    double eps = 0.3;
    Problem kn = Problem::kaehler_normal({1.0, 0.0}, 0.0);
    FourierField du = rhs(kn, {sin_field(2, eps, 8), 0.0}).u;
    CHECK(max_abs_coeff(du - sin_field(4, 1.5 * eps * eps, 8)) < 1e-14);

    // with lambda != 0 the multiplier adds 2 lambda eps cos 2theta
    double lam = 0.5;
    Problem knl = Problem::kaehler_normal({1.0, 0.0}, lam);
    FourierField dul = rhs(knl, {sin_field(2, eps, 8), lam}).u;
    CHECK(max_abs_coeff(dul - sin_field(4, 1.5 * eps * eps, 8) - cos_field(2, 2.0 * lam * eps, 8)) <
          1e-14);

    // Virasoro at small amplitude: udot = eps n^3 sin(n theta) + O(eps^2)
    Problem kdv = Problem::virasoro({0.0, 1.0}, 0.0, 1.0);
    for (int n : {2, 3}) {
        FourierField d = rhs(kdv, {cos_field(n, 1e-5, 8), VirMultiplier{0.0, 1.0}}).u;
        CHECK(max_abs_coeff(d - sin_field(n, 1e-5 * n * n * n, 8)) < 1e-9);
    }

    // Weil-Petersson with w = 0: the mob multiplier is frozen
    GeodesicState wpst{cos_field(2, 0.1, 6), MobMultiplier{0.3, cplx(0.0)}};
    GeodesicState dwp = rhs(Problem::weil_petersson(), wpst);
    const auto& dm = std::get<MobMultiplier>(dwp.multiplier);
    CHECK(dm.lambda0 == 0.0);
    CHECK(std::abs(dm.w) == 0.0);
}

TEST_CASE("zero field is stationary for every problem") {
    for (Problem pb : {Problem::riemann_l2(), Problem::sobolev({1.0, 1.0}),
                       Problem::kaehler_riemann({1.0, 0.0}), Problem::kaehler_normal({1.0, 0.0}, 0.4),
                       Problem::weil_petersson(), Problem::virasoro({0.0, 1.0}, 0.3, 1.0)}) {
        Trajectory tr = integrate(pb, {FourierField(8), {}}, 0.1, 0.01);
        CHECK(max_abs_coeff(tr.states.back().u) < 1e-13);
    }
}

TEST_CASE("burgers integration matches characteristics") {
    FourierField u0 = sin_field(1, 0.1, 16);
    Trajectory tr = integrate(Problem::riemann_l2(), {u0, {}}, 0.05, 1e-4);
    const FourierField& uT = tr.states.back().u;
    double err = 0.0;
    for (int j = 0; j < 32; ++j) {
        double th = two_pi * j / 32;
        err = std::max(err, std::abs(uT.evaluate(th) - oracles::burgers_characteristics(u0, th, 0.05)));
    }
    CHECK(err < 1e-6);
}

TEST_CASE("energy is conserved along geodesics") {
    std::mt19937_64 rng(51);
    auto drift = [&](const Problem& pb, GeodesicState st) {
        Trajectory tr = integrate(pb, std::move(st), 0.5, 1e-3);
        return diagnostics(tr).max_rel_energy_drift;
    };
    FourierField full = random_field(rng, 12, 0.05);
    FourierField v0 = project(random_field(rng, 12, 0.05), Subspace::Vect0);
    FourierField d0 = project(random_field(rng, 12, 0.05), Subspace::D);

    CHECK(drift(Problem::riemann_l2(), {full, {}}) < 1e-9);
    CHECK(drift(Problem::sobolev({1.0, 1.0}), {full, {}}) < 1e-9);
    CHECK(drift(Problem::kaehler_riemann({1.0, 0.0}), {full, {}}) < 1e-9);
    CHECK(drift(Problem::kaehler_normal({1.0, 0.0}, 0.5), {v0, 0.5}) < 1e-9);
    CHECK(drift(Problem::weil_petersson(), {d0, MobMultiplier{0.2, cplx(0.05, -0.03)}}) < 1e-9);
    CHECK(drift(Problem::virasoro({0.0, 1.0}, 0.3, 1.0), {v0, VirMultiplier{0.3, 1.0}}) < 1e-9);
}

TEST_CASE("weil-petersson multiplier dynamics") {
    FourierField d0(8);
    d0.set_coeff(2, cplx(0.04, -0.02));
    d0.set_coeff(3, cplx(-0.02, 0.01));
    d0.set_coeff(4, cplx(0.01, 0.005));
    GeodesicState st{d0, MobMultiplier{0.2, cplx(0.05, -0.03)}};
    Trajectory tr = integrate(Problem::weil_petersson(), st, 1.0, 1e-3);
    Report rep = diagnostics(tr);
    CHECK(rep.lambda0_drift < 1e-14);
    CHECK(rep.max_wp_closure_residual < 1e-10);
    CHECK(rep.max_subspace_leak < 1e-10);

    // |w| is conserved: wdot = 3 i conj(w) c_2 gives d|w|^2/dt = 2 Re(conj(w) wdot)
    // = 6 Re(i conj(w)^2 c_2) which need not vanish, but the energy drift above
    // already constrains the pair; check the closed form directly against a
    // finite difference of the stored multiplier.
    const auto& m0 = std::get<MobMultiplier>(tr.states[100].multiplier);
    const auto& m2 = std::get<MobMultiplier>(tr.states[102].multiplier);
    cplx fd = (m2.w - m0.w) / (2.0 * tr.dt);
    const auto& m1 = std::get<MobMultiplier>(tr.states[101].multiplier);
    cplx closed = 3.0 * cplx(0.0, 1.0) * std::conj(m1.w) * tr.states[101].u.coeff(2);
    CHECK(std::abs(fd - closed) < 1e-5);
}

TEST_CASE("mob modes of the inertia transpose cancel identically") {
    // On D with a_n = |n|(n^2 - 1), the mob component of ad_u^T(A u) vanishes,
    // which is what makes the normal system close.
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 10; ++trial) {
        FourierField u = project(random_field(rng, 10, 0.3), Subspace::D);
        FourierField m = inertia_apply(InertiaKind::kaehler(weil_petersson_params, Subspace::D), u);
        FourierField r = project(ad_transpose(u, m), Subspace::Mob);
        CHECK(max_abs_coeff(r) < 1e-12);
    }
}

TEST_CASE("eta0 is constant along the full kaehler flow") {
    FourierField u0(8);
    u0.set_coeff(0, 0.4);
    u0.set_coeff(1, cplx(0.08, -0.03));
    u0.set_coeff(2, cplx(-0.05, 0.02));
    Trajectory tr = integrate(Problem::kaehler_riemann({1.0, 0.0}), {u0, {}}, 0.5, 1e-3);
    CHECK(diagnostics(tr).eta0_drift < 1e-10);
}

TEST_CASE("rotate_shift") {
    FourierField u0(8);
    u0.set_coeff(0, 0.4);
    u0.set_coeff(1, cplx(0.08, -0.03));
    u0.set_coeff(2, cplx(-0.05, 0.02));
    Trajectory tr = integrate(Problem::kaehler_riemann({1.0, 0.0}), {u0, {}}, 0.5, 1e-3);
    Trajectory sh = rotate_shift(tr);

    CHECK(sh.problem.kind == ProblemKind::KaehlerNormal);
    CHECK(sh.problem.lambda == doctest::Approx(0.4));
    for (int k = 0; k < sh.size(); k += 100) {
        const auto& st = sh.states[static_cast<size_t>(k)];
        CHECK(eta0(st.u) == 0.0);
        CHECK(std::get<double>(st.multiplier) == doctest::Approx(0.4));
    }

    // zero-mean input: lambda = 0 and the shift is trivial
    FourierField v0 = project(u0, Subspace::Vect0);
    Trajectory tz = integrate(Problem::kaehler_riemann({1.0, 0.0}), {v0, {}}, 0.2, 1e-3);
    Trajectory sz = rotate_shift(tz);
    CHECK(sz.problem.lambda == 0.0);
    for (int k = 0; k < sz.size(); k += 50)
        CHECK(max_abs_coeff(sz.states[static_cast<size_t>(k)].u -
                            tz.states[static_cast<size_t>(k)].u) < 1e-12);

    CHECK_THROWS_AS((void)rotate_shift(sz), DomainError);
}

TEST_CASE("integrate validates its input") {
    // mob content is outside the Weil-Petersson domain
    FourierField bad(4);
    bad.set_coeff(1, cplx(0.1, 0.0));
    CHECK_THROWS_AS((void)integrate(Problem::weil_petersson(), {bad, MobMultiplier{}}, 0.1, 0.01),
                    DomainError);

    // degenerate metric rejected for the normal flow
    FourierField ok = sin_field(2, 0.1, 4);
    CHECK_THROWS_AS(
        (void)integrate(Problem::kaehler_normal({-1.0, 1.0}, 0.0), {ok, 0.0}, 0.1, 0.01),
        DomainError);

    CHECK_THROWS_AS((void)integrate(Problem::riemann_l2(), {ok, {}}, 0.1, -0.01), DomainError);
}

TEST_CASE("blow-up reports the last valid time and a partial trajectory") {
    // far beyond wave breaking with a coarse step the coefficients overflow
    FourierField u0 = sin_field(1, 50.0, 8);
    Trajectory partial;
    try {
        (void)integrate(Problem::riemann_l2(), {u0, {}}, 50.0, 0.5, &partial);
        FAIL("expected blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.last_valid_time() >= 0.0);
        CHECK(e.last_valid_time() < 50.0);
        CHECK(partial.size() >= 1);
        CHECK(partial.states.back().u.finite());
    }
}

TEST_CASE("kdv dispersion relation at small amplitude") {
    // single mode n with amplitude eps: c_n(t) ~ c_n(0) exp(i (2 l1 n - n^3) t)
    for (double l1 : {0.0, 0.25}) {
        Problem pb = Problem::virasoro({0.0, 1.0}, l1, 1.0);
        for (int n : {2, 3}) {
            FourierField u0 = cos_field(n, 2e-4, 8);
            Trajectory tr = integrate(pb, {u0, {}}, 1.0, 1e-3);
            cplx got = tr.states.back().u.coeff(n);
            cplx want = u0.coeff(n) * std::polar(1.0, (2.0 * l1 * n - n * n * n) * 1.0);
            CHECK(std::abs(got - want) / std::abs(want) < 1e-3);
        }
    }
}
