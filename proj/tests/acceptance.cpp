// Acceptance gate: every release criterion in one binary, one line per
// criterion, nonzero exit on any failure.

#include <circleflow/diffeo.hpp>
#include <circleflow/experiment.hpp>
#include <circleflow/geodesics.hpp>
#include <circleflow/metrics.hpp>
#include <circleflow/oracles.hpp>
#include <circleflow/random_fields.hpp>
#include <circleflow/selfcheck.hpp>
#include <circleflow/virasoro.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace circleflow;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& name, double metric, double threshold, bool pass = true) {
    pass = pass && metric < threshold;
    if (!pass) ++failures;
    std::printf("[%s] %-28s metric=%.3e threshold=%.3e\n", pass ? "PASS" : "FAIL", name.c_str(),
                metric, threshold);
    std::fflush(stdout);
}

void report(const selfcheck::CheckResult& r, const std::string& name) {
    report(name, r.metric, r.threshold, r.pass);
}

FourierField sin_field(int n, double amp, int order) {
    FourierField f(order);
    f.set_coeff(n, cplx(0.0, -0.5 * amp));
    return f;
}

FourierField cos_field(int n, double amp, int order) {
    FourierField f(order);
    f.set_coeff(n, cplx(0.5 * amp, 0.0));
    return f;
}

// 1. Spectral Hilbert multiplier vs principal-value kernel quadrature.
void criterion_hilbert() { report(selfcheck::check_hilbert_kernel(), "hilbert-kernel"); }

// 2. The invariant metric agrees with its operator form <L J x' + eta0 x, y>
// and, on zero-mean fields, with the Kirillov pairing of univalent tangents
// (real part the metric, imaginary part the symplectic form).
void criterion_metric_consistency() {
    std::mt19937_64 rng(101);
    double err = 0.0;
    for (MetricParams p : {MetricParams{1.0, 0.0}, MetricParams{1.0, 1.0}, MetricParams{-1.0, 1.0}}) {
        Subspace s = p.alpha < 0.0 ? Subspace::D : Subspace::Vect0;
        for (int trial = 0; trial < 34; ++trial) {
            FourierField x = random_field(rng, 16, 0.4, s);
            FourierField y = random_field(rng, 16, 0.4, s);
            double op = l2_inner(apply_L(p, hilbert(derivative(x))) + FourierField::constant(eta0(x)), y);
            err = std::max(err, std::abs(inner(p, x, y) - op));
            cplx b = kirillov_metric(p, to_univalent(x), to_univalent(y));
            err = std::max(err, std::abs(b.real() - inner(p, x, y)));
            err = std::max(err, std::abs(b.imag() - omega(p, x, y)));
        }
    }
    report("metric-consistency", err, 1e-10);
}

// 3. <ad_x^T y, z> = <y, [x, z]> against quadrature, plain and extended.
void criterion_adjointness() { report(selfcheck::check_adjointness(), "adjointness"); }

// 4. tau_apply o tau_invert = id on sampled paths.
void criterion_tau_roundtrip() { report(selfcheck::check_tau_roundtrip(), "tau-roundtrip"); }

// 5. Burgers vs method of characteristics, plus fourth-order step convergence.
void criterion_burgers() {
    FourierField u0 = sin_field(1, 0.1, 32);
    Trajectory tr = integrate(Problem::riemann_l2(), {u0, {}}, 0.05, 1e-4);
    double err = 0.0;
    for (int j = 0; j < 64; ++j) {
        double th = two_pi * j / 64;
        err = std::max(err,
                       std::abs(tr.states.back().u.evaluate(th) -
                                oracles::burgers_characteristics(u0, th, 0.05)));
    }
    report("burgers-characteristics", err, 1e-6);

    FourierField v0 = sin_field(1, 0.4, 32);
    auto final_at = [&](double dt) {
        return integrate(Problem::riemann_l2(), {v0, {}}, 0.25, dt).states.back().u;
    };
    FourierField ref = final_at(1e-4);
    double e1 = max_abs_coeff(final_at(0.025) - ref);
    double e2 = max_abs_coeff(final_at(0.0125) - ref);
    double order = std::log2(e1 / e2);
    report("burgers-step-order", -order, -3.8, e2 > 0.0);
}

Problem criterion_problems[6] = {
    Problem::riemann_l2(),
    Problem::sobolev({1.0, 1.0}),
    Problem::kaehler_riemann({1.0, 0.0}),
    Problem::kaehler_normal({1.0, 0.0}, 0.5),
    Problem::weil_petersson(),
    Problem::virasoro({0.0, 1.0}, 0.3, 1.0),
};

GeodesicState criterion_initial(const Problem& pb) {
    std::mt19937_64 rng(2024);
    FourierField u = random_field(rng, 12, 0.08, pb.domain());
    FourierField full(32);
    for (int n = 0; n <= 12; ++n) full.set_coeff(n, u.coeff(n));
    Multiplier m{};
    if (pb.kind == ProblemKind::WeilPetersson) m = MobMultiplier{0.2, cplx(0.05, -0.03)};
    return {std::move(full), m};
}

std::vector<Trajectory> criterion_trajectories;

// 6. Kinetic energy conserved to 1e-8 over unit time for every problem.
void criterion_energy() {
    double drift = 0.0;
    for (const Problem& pb : criterion_problems) {
        Trajectory tr = integrate(pb, criterion_initial(pb), 1.0, 1e-3);
        drift = std::max(drift, diagnostics(tr).max_rel_energy_drift);
        criterion_trajectories.push_back(std::move(tr));
    }
    report("energy-conservation", drift, 1e-8);
}

// 7. Mean of the full Kaehler flow is constant, and the rotation-shift of the
// Riemannian trajectory satisfies the normal geodesic equation.
void criterion_rotate_shift() {
    FourierField u0(32);
    u0.set_coeff(0, 0.4);
    u0.set_coeff(1, cplx(0.08, -0.03));
    u0.set_coeff(2, cplx(-0.05, 0.02));
    u0.set_coeff(3, cplx(0.02, 0.01));
    Trajectory tr = integrate(Problem::kaehler_riemann({1.0, 0.0}), {u0, {}}, 1.0, 1e-3);
    report("eta0-conservation", diagnostics(tr).eta0_drift, 1e-10);
    report(selfcheck::check_rotate_shift(), "rotate-shift");
}

// 8. Weil-Petersson multiplier dynamics: frozen lambda0, closed-form wdot,
// and identically vanishing mob component of the inertia transpose.
void criterion_weil_petersson() {
    std::mt19937_64 rng0(404);
    GeodesicState st{random_field(rng0, 8, 0.1, Subspace::D), MobMultiplier{0.2, cplx(0.05, -0.03)}};
    Trajectory tr = integrate(Problem::weil_petersson(), st, 1.0, 1e-3);
    Report rep = diagnostics(tr);
    report("wp-lambda0-frozen", rep.lambda0_drift, 1e-12);
    report("wp-wdot-closed-form", rep.max_wp_closure_residual, 1e-10);

    std::mt19937_64 rng(808);
    double err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        FourierField u = random_field(rng, 12, 0.3, Subspace::D);
        FourierField m = inertia_apply(InertiaKind::kaehler(weil_petersson_params, Subspace::D), u);
        err = std::max(err, max_abs_coeff(project(ad_transpose(u, m), Subspace::Mob)));
    }
    report("wp-mob-cancellation", err, 1e-12);
}

// 9. KdV dispersion relation exp(i (2 lambda1 n - n^3) t) at small amplitude.
void criterion_kdv_dispersion() {
    double rel = 0.0;
    for (double l1 : {0.0, 0.25}) {
        Problem pb = Problem::virasoro({0.0, 1.0}, l1, 1.0);
        for (int n : {2, 3}) {
            FourierField u0 = cos_field(n, 2e-4, 8);
            Trajectory tr = integrate(pb, {u0, {}}, 1.0, 1e-3);
            cplx want = u0.coeff(n) * std::polar(1.0, 2.0 * l1 * n - double(n) * n * n);
            rel = std::max(rel, std::abs(tr.states.back().u.coeff(n) - want) / std::abs(want));
        }
    }
    report("kdv-dispersion", rel, 1e-3);
}

// 10. Virasoro-Bott group law: central associativity on random triples, and
// exactly trivial cocycles on the rotation subgroup.
void criterion_cocycles() {
    std::mt19937_64 rng(5150);
    int m = 512;
    CentralParams cp{0.7, 1.0};
    double assoc = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        VirasoroElement g1{Diffeo(random_displacement(rng, m, 0.2)), 0.1};
        VirasoroElement g2{Diffeo(random_displacement(rng, m, 0.2)), -0.2};
        VirasoroElement g3{Diffeo(random_displacement(rng, m, 0.2)), 0.3};
        VirasoroElement lhs = vir_multiply(cp, vir_multiply(cp, g1, g2), g3);
        VirasoroElement rhs = vir_multiply(cp, g1, vir_multiply(cp, g2, g3));
        assoc = std::max(assoc, std::abs(lhs.b - rhs.b));
    }
    report("cocycle-associativity", assoc, 1e-8);

    Diffeo ra = Diffeo::rotation(m, 0.4), rb = Diffeo::rotation(m, -1.1);
    double rot = std::max(std::abs(cocycle_A(ra, rb)), std::abs(cocycle_B(ra, rb)));
    report("cocycle-rotations", rot, 1e-12);
}

// 11. Weak Euler-Arnold form: the full momentum annihilates tau_u of any test
// curve vanishing at the endpoints, integrated by trapezoid over time.
void criterion_weak_euler_arnold() {
    std::mt19937_64 rng(1111);
    double worst = 0.0;
    for (size_t ip = 0; ip < 6; ++ip) {
        const Problem& pb = criterion_problems[ip];
        const Trajectory& tr = criterion_trajectories[ip];
        int ns = tr.size();
        for (int k = 1; k <= 4; ++k) {
            for (int rep = 0; rep < 5; ++rep) {
                FourierField f = random_field(rng, 8, 0.1);
                double integral = 0.0, prev = 0.0;
                for (int s = 0; s < ns; ++s) {
                    double t = tr.t[static_cast<size_t>(s)];
                    const GeodesicState& st = tr.states[static_cast<size_t>(s)];
                    FourierField m = momentum_field(pb, st);
                    double a = momentum_central(pb, st);
                    FourierField x = std::sin(std::numbers::pi * k * t) * f;
                    FourierField xdot = std::numbers::pi * k * std::cos(std::numbers::pi * k * t) * f;
                    double g = l2_inner(m, xdot + bracket(st.u, x));
                    if (a != 0.0) g += a * gelfand_fuchs(pb.central, st.u, x);
                    if (s > 0) integral += 0.5 * tr.dt * (prev + g);
                    prev = g;
                }
                worst = std::max(worst, std::abs(integral));
            }
        }
    }
    report("weak-euler-arnold", worst, 1e-5);
}

// 12. Bitwise determinism of every preset, and a clean built-in self-check.
void criterion_determinism() {
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool identical = true;
    fs::path base = fs::temp_directory_path() / "circleflow-acceptance";
    fs::remove_all(base);
    for (const auto& [name, entry] : presets()) {
        ExperimentConfig c = build_config(parse_config_text(entry.second));
        fs::path d1 = base / (name + "-1"), d2 = base / (name + "-2");
        RunResult r1 = run_experiment(c, d1);
        RunResult r2 = run_experiment(c, d2);
        identical = identical && r1.status == RunStatus::Ok && r2.status == RunStatus::Ok &&
                    slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv") &&
                    slurp(d1 / "metadata.json") == slurp(d2 / "metadata.json");
    }
    fs::remove_all(base);
    report("preset-determinism", identical ? 0.0 : 1.0, 0.5);

    bool checks_pass = true;
    for (const auto& r : selfcheck::run_all()) checks_pass = checks_pass && r.pass;
    report("self-check", checks_pass ? 0.0 : 1.0, 0.5);
}

}  // namespace

int main() {
    criterion_hilbert();
    criterion_metric_consistency();
    criterion_adjointness();
    criterion_tau_roundtrip();
    criterion_burgers();
    criterion_energy();
    criterion_rotate_shift();
    criterion_weil_petersson();
    criterion_kdv_dispersion();
    criterion_cocycles();
    criterion_weak_euler_arnold();
    criterion_determinism();
    if (failures) std::printf("%d criteria FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures ? 1 : 0;
}
