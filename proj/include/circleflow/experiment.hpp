#pragma once

#include "errors.hpp"
#include "geodesics.hpp"
#include "oracles.hpp"
#include "version.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace circleflow {

/** A fully resolved experiment: problem, initial data, discretization. */
struct ExperimentConfig {
    std::string problem_tag = "burgers";
    Problem problem{};
    std::map<int, cplx> modes;  // explicit initial coefficients
    int order = 32;
    double T = 1.0;
    double dt = 1e-3;
    // Weil-Petersson initial multiplier
    double lambda0 = 0.0;
    cplx w{};
    // optional randomized initial data
    std::optional<uint64_t> seed;
    double random_amplitude = 0.05;
    int random_min_mode = 1;
    int random_max_mode = 8;

    std::map<std::string, std::string> raw;  // echoed into metadata
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace detail

/** Parse the flat key-value config format:  key = value  lines, '#' comments. */
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
        if (kv.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

/** Build a validated config from raw key-value pairs; unknown keys rejected. */
inline ExperimentConfig build_config(const std::map<std::string, std::string>& kv) {
    ExperimentConfig c;
    c.raw = kv;
    double alpha = 1.0, beta = 0.0, mu = 0.0, nu = 1.0;
    double lambda = 0.0, lambda1 = 0.0, lambda2 = 1.0;
    for (const auto& [key, val] : kv) {
        if (key == "problem") c.problem_tag = val;
        else if (key == "alpha") alpha = detail::parse_double(key, val);
        else if (key == "beta") beta = detail::parse_double(key, val);
        else if (key == "mu") mu = detail::parse_double(key, val);
        else if (key == "nu") nu = detail::parse_double(key, val);
        else if (key == "lambda") lambda = detail::parse_double(key, val);
        else if (key == "lambda1") lambda1 = detail::parse_double(key, val);
        else if (key == "lambda2") lambda2 = detail::parse_double(key, val);
        else if (key == "lambda0") c.lambda0 = detail::parse_double(key, val);
        else if (key == "w_re") c.w = cplx(detail::parse_double(key, val), c.w.imag());
        else if (key == "w_im") c.w = cplx(c.w.real(), detail::parse_double(key, val));
        else if (key == "order") c.order = static_cast<int>(detail::parse_double(key, val));
        else if (key == "T") c.T = detail::parse_double(key, val);
        else if (key == "dt") c.dt = detail::parse_double(key, val);
        else if (key == "seed") c.seed = static_cast<uint64_t>(detail::parse_double(key, val));
        else if (key == "random_amplitude") c.random_amplitude = detail::parse_double(key, val);
        else if (key == "random_min_mode") c.random_min_mode = static_cast<int>(detail::parse_double(key, val));
        else if (key == "random_max_mode") c.random_max_mode = static_cast<int>(detail::parse_double(key, val));
        else if (key.rfind("mode.", 0) == 0) {
            int n = 0;
            try {
                n = std::stoi(key.substr(5));
            } catch (const std::exception&) {
                throw ConfigError("config: bad mode key '" + key + "'");
            }
            if (n < 0) throw ConfigError("config: mode index must be nonnegative");
            std::istringstream vv(val);
            double re = 0.0, im = 0.0;
            if (!(vv >> re >> im)) throw ConfigError("config: mode value must be 're im'");
            c.modes[n] = cplx(re, im);
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    if (c.problem_tag == "burgers") c.problem = Problem::riemann_l2();
    else if (c.problem_tag == "sobolev") c.problem = Problem::sobolev({alpha, beta});
    else if (c.problem_tag == "kaehler-riemann") c.problem = Problem::kaehler_riemann({alpha, beta});
    else if (c.problem_tag == "kaehler-normal") c.problem = Problem::kaehler_normal({alpha, beta}, lambda);
    else if (c.problem_tag == "weil-petersson") c.problem = Problem::weil_petersson();
    else if (c.problem_tag == "virasoro") c.problem = Problem::virasoro({mu, nu}, lambda1, lambda2);
    else throw ConfigError("config: unknown problem '" + c.problem_tag + "'");

    if (c.order <= 0 || c.dt <= 0.0 || c.T <= 0.0)
        throw ConfigError("config: order, dt and T must be positive");
    for (const auto& [n, v] : c.modes) {
        if (n > c.order) throw ConfigError("config: mode " + std::to_string(n) + " beyond order");
        if (!retains(c.problem.domain(), n) && std::abs(v) > 0.0)
            throw ConfigError("config: mode " + std::to_string(n) + " outside the problem subspace");
    }
    return c;
}

inline GeodesicState initial_state(const ExperimentConfig& c) {
    FourierField u(c.order);
    for (const auto& [n, v] : c.modes) u.set_coeff(n, v);
    if (c.seed) {
        std::mt19937_64 rng(*c.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int n = std::max(0, c.random_min_mode); n <= std::min(c.order, c.random_max_mode); ++n) {
            cplx z(gauss(rng), n == 0 ? 0.0 : gauss(rng));
            if (retains(c.problem.domain(), n))
                u.set_coeff(n, u.coeff(n) + c.random_amplitude * std::pow(0.7, n) * z);
        }
    }
    Multiplier m = detail::default_multiplier(c.problem);
    if (c.problem.kind == ProblemKind::WeilPetersson) m = MobMultiplier{c.lambda0, c.w};
    return {std::move(u), m};
}

enum class RunStatus { Ok = 0, Internal = 1, Config = 2, BlowUp = 3, SingularMode = 4 };

struct RunResult {
    RunStatus status = RunStatus::Ok;
    double failure_time = 0.0;
    Report report{};
    std::map<std::string, double> extras;
};

namespace detail {

inline void write_csv(const Trajectory& traj, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    out << "t,n,re,im,energy,eta0,eta1_re,eta1_im,lambda0,w_re,w_im,rot,lambda1,lambda2\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (int k = 0; k < traj.size(); ++k) {
        const auto& st = traj.states[static_cast<size_t>(k)];
        const auto& d = traj.diag[static_cast<size_t>(k)];
        double lam0 = 0.0, wre = 0.0, wim = 0.0, rot = 0.0, l1 = 0.0, l2 = 0.0;
        if (std::holds_alternative<double>(st.multiplier)) rot = std::get<double>(st.multiplier);
        if (std::holds_alternative<MobMultiplier>(st.multiplier)) {
            const auto& mm = std::get<MobMultiplier>(st.multiplier);
            lam0 = mm.lambda0;
            wre = mm.w.real();
            wim = mm.w.imag();
        }
        if (std::holds_alternative<VirMultiplier>(st.multiplier)) {
            l1 = std::get<VirMultiplier>(st.multiplier).lambda1;
            l2 = std::get<VirMultiplier>(st.multiplier).lambda2;
        }
        std::string tail = num(d.energy) + "," + num(d.eta0) + "," + num(d.eta1.real()) + "," +
                           num(d.eta1.imag()) + "," + num(lam0) + "," + num(wre) + "," + num(wim) +
                           "," + num(rot) + "," + num(l1) + "," + num(l2);
        for (int n = 0; n <= st.u.order(); ++n) {
            out << num(traj.t[static_cast<size_t>(k)]) << ',' << n << ',' << num(st.u.coeff(n).real())
                << ',' << num(st.u.coeff(n).imag()) << ',' << tail << '\n';
        }
    }
}

}  // namespace detail

/** Run one experiment and write trajectory.csv + metadata.json into outdir.
 * Bitwise deterministic for a fixed config and seed; no timestamps. */
inline RunResult run_experiment(const ExperimentConfig& c, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    RunResult res;
    Trajectory traj;
    std::string message = "ok";
    try {
        Trajectory partial;
        try {
            traj = integrate(c.problem, initial_state(c), c.T, c.dt, &partial);
        } catch (const BlowUpError& e) {
            traj = std::move(partial);
            res.status = RunStatus::BlowUp;
            res.failure_time = e.last_valid_time();
            message = e.what();
        }
    } catch (const SingularModeError& e) {
        res.status = RunStatus::SingularMode;
        message = e.what();
    } catch (const DomainError& e) {
        res.status = RunStatus::Config;
        message = e.what();
    }

    if (!traj.states.empty()) {
        res.report = diagnostics(traj);
        detail::write_csv(traj, outdir / "trajectory.csv");
        if (c.problem.kind == ProblemKind::RiemannL2 && res.status == RunStatus::Ok) {
            // built-in characteristics cross-check at the final time
            const FourierField& u0 = traj.states.front().u;
            const FourierField& uT = traj.states.back().u;
            double tf = traj.t.back(), err = 0.0;
            for (int j = 0; j < 64; ++j) {
                double th = two_pi * j / 64;
                err = std::max(err, std::abs(uT.evaluate(th) - oracles::burgers_characteristics(u0, th, tf)));
            }
            res.extras["burgers_oracle_sup_error"] = err;
        }
        if (c.problem.kind == ProblemKind::WeilPetersson) {
            res.extras["lambda0_drift"] = res.report.lambda0_drift;
            res.extras["wdot_crosscheck_residual"] = res.report.max_wp_closure_residual;
        }
    }

    nlohmann::json meta;
    meta["config"] = c.raw;
    meta["library_version"] = version;
    meta["status"] = static_cast<int>(res.status);
    meta["message"] = message;
    if (res.status == RunStatus::BlowUp) meta["failure_time"] = res.failure_time;
    meta["summary"] = {{"initial_energy", res.report.initial_energy},
                       {"max_rel_energy_drift", res.report.max_rel_energy_drift},
                       {"total_energy", res.report.total_energy},
                       {"max_subspace_leak", res.report.max_subspace_leak},
                       {"eta0_drift", res.report.eta0_drift}};
    for (const auto& [k, v] : res.extras) meta["summary"][k] = v;
    std::ofstream(outdir / "metadata.json") << meta.dump(2) << '\n';
    return res;
}

/** Built-in presets, each a complete config text. */
inline const std::map<std::string, std::pair<std::string, std::string>>& presets() {
    static const std::map<std::string, std::pair<std::string, std::string>> p = {
        {"burgers-smoke",
         {"Burgers flow of 0.1 sin(theta) before wave breaking, with characteristics cross-check",
          "problem = burgers\norder = 32\nT = 0.05\ndt = 1e-4\nmode.1 = 0 -0.05\n"}},
        {"camassa-holm-smoke",
         {"Camassa-Holm (Sobolev inertia 1 - d^2) with a two-mode initial field",
          "problem = sobolev\nalpha = 1\nbeta = 1\norder = 32\nT = 1\ndt = 1e-3\n"
          "mode.1 = 0.1 0\nmode.2 = 0 0.05\n"}},
        {"clm-smoke",
         {"Full Riemannian flow of the Velling-Kirillov metric (CLM type) with nonzero mean",
          "problem = kaehler-riemann\nalpha = 1\nbeta = 0\norder = 32\nT = 1\ndt = 1e-3\n"
          "mode.0 = 0.4 0\nmode.1 = 0.08 -0.03\nmode.2 = -0.05 0.02\n"}},
        {"kdv-smoke",
         {"Virasoro normal geodesic (KdV family) at small amplitude",
          "problem = virasoro\nmu = 0\nnu = 1\nlambda1 = 0.25\nlambda2 = 1\norder = 16\n"
          "T = 1\ndt = 1e-3\nmode.2 = 0.0001 0\n"}},
        {"wp-check",
         {"Weil-Petersson horizontal flow with mob multiplier and closed-form cross-check",
          "problem = weil-petersson\norder = 8\nT = 1\ndt = 1e-3\n"
          "mode.2 = 0.04 -0.02\nmode.3 = -0.02 0.01\nmode.4 = 0.01 0.005\n"
          "lambda0 = 0.2\nw_re = 0.05\nw_im = -0.03\n"}},
    };
    return p;
}

/** Expand comma-separated values into a Cartesian grid of configs. */
inline std::vector<std::map<std::string, std::string>> expand_sweep(
    const std::map<std::string, std::string>& kv) {
    std::vector<std::map<std::string, std::string>> points{{}};
    for (const auto& [key, val] : kv) {
        std::vector<std::string> vals;
        std::stringstream ss(val);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (!item.empty()) vals.push_back(item);
        }
        if (vals.empty()) vals.push_back("");
        std::vector<std::map<std::string, std::string>> next;
        next.reserve(points.size() * vals.size());
        for (const auto& pt : points)
            for (const auto& v : vals) {
                auto q = pt;
                q[key] = v;
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

}  // namespace circleflow
