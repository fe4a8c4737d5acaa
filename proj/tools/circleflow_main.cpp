// circleflow command line runner: deterministic geodesic experiments on the
// circle diffeomorphism group and its central extension.

#include <circleflow/experiment.hpp>
#include <circleflow/selfcheck.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace circleflow;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int status_to_exit(RunStatus s) { return static_cast<int>(s); }

int do_run(const std::string& config_path, const std::string& out_dir,
           const std::string& preset_name) {
    std::map<std::string, std::string> kv;
    if (!preset_name.empty()) {
        auto it = presets().find(preset_name);
        if (it == presets().end()) {
            std::cerr << "unknown preset: " << preset_name << "\n";
            return 2;
        }
        kv = parse_config_text(it->second.second);
    } else {
        kv = parse_config_text(read_file(config_path));
    }
    ExperimentConfig cfg = build_config(kv);
    RunResult res = run_experiment(cfg, out_dir);
    std::cout << (res.status == RunStatus::Ok ? "ok" : "failed") << ": output in " << out_dir << "\n";
    return status_to_exit(res.status);
}

int do_check(const std::string& filter) {
    auto results = selfcheck::run_all(filter);
    if (results.empty()) {
        std::cerr << "no checks match filter '" << filter << "'\n";
        return 2;
    }
    bool all = true;
    for (const auto& r : results) {
        std::printf("%-24s %s  (metric %.3e, threshold %.1e)\n", r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.metric, r.threshold);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

int do_sweep(const std::string& config_path, const std::string& out_dir) {
    auto kv = parse_config_text(read_file(config_path));
    auto points = expand_sweep(kv);
    // validate all points before launching anything
    std::vector<ExperimentConfig> cfgs;
    cfgs.reserve(points.size());
    for (const auto& pt : points) cfgs.push_back(build_config(pt));

    int nthreads = 1;
    if (const char* env = std::getenv("CIRCLEFLOW_THREADS")) nthreads = std::max(1, std::atoi(env));
    nthreads = std::min<int>(nthreads, static_cast<int>(cfgs.size()));

    std::atomic<size_t> next{0};
    std::atomic<int> worst{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cfgs.size()) return;
            char name[32];
            std::snprintf(name, sizeof name, "point-%03zu", i);
            RunResult res = run_experiment(cfgs[i], std::filesystem::path(out_dir) / name);
            int code = status_to_exit(res.status);
            int cur = worst.load();
            while (code > cur && !worst.compare_exchange_weak(cur, code)) {}
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::cout << cfgs.size() << " sweep points written to " << out_dir << "\n";
    return worst.load();
}

int do_presets() {
    for (const auto& [name, desc] : presets())
        std::printf("%-20s %s\n", name.c_str(), desc.first.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral geodesic flows on the circle diffeomorphism group"};
    app.require_subcommand(1);

    std::string config_path, out_dir, preset_name, filter;

    auto* run = app.add_subcommand("run", "run one experiment from a config file or preset");
    auto* cfg_opt = run->add_option("--config", config_path, "config file (key = value lines)");
    run->add_option("--preset", preset_name, "built-in preset name")->excludes(cfg_opt);
    run->add_option("--out", out_dir, "output directory")->required();

    auto* check = app.add_subcommand("check", "run the built-in oracle suite");
    check->add_option("--filter", filter, "only checks whose name contains this substring");

    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter grid, one directory per point");
    sweep->add_option("--config", config_path, "sweep config (comma-separated values fan out)")->required();
    sweep->add_option("--out", out_dir, "output directory")->required();

    app.add_subcommand("presets", "list built-in presets");

    try {
        app.parse(argc, argv);
        if (run->parsed()) {
            if (config_path.empty() && preset_name.empty())
                throw circleflow::ConfigError("run: need --config or --preset");
            return do_run(config_path, out_dir, preset_name);
        }
        if (check->parsed()) return do_check(filter);
        if (sweep->parsed()) return do_sweep(config_path, out_dir);
        return do_presets();
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const circleflow::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const circleflow::BlowUpError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const circleflow::SingularModeError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
