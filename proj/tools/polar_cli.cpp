// polar_cli: runs the cell-polarization experiments from the command line.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 bad configuration.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polar/polar.hpp"

namespace {

struct Flags {
    std::string config;
    std::string scenario;
    int n = 0;
    std::vector<double> eps;
    std::string outdir;
    std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "INI config file");
    sub->add_option("--scenario", f.scenario, "continuity, jump, nongeneric or classical");
    sub->add_option("--n", f.n, "grid cells per side");
    sub->add_option("--eps", f.eps, "regularization sweep, e.g. --eps 1e-2 1e-3")->delimiter(',');
    sub->add_option("--outdir", f.outdir, "where reports and trajectories are written");
    sub->add_option("--seed", f.seed, "seed for randomized checks");
}

polar::ExperimentConfig resolve(const Flags& f, const std::string& fallback_scenario) {
    polar::ExperimentConfig cfg;
    if (!f.config.empty()) {
        cfg = polar::load_config(f.config);
        if (!f.scenario.empty()) cfg.scenario = f.scenario;
        if (f.n > 0 && f.n != cfg.n) cfg.n = f.n;
    } else {
        cfg = polar::ExperimentConfig::defaults_for(f.scenario.empty() ? fallback_scenario : f.scenario,
                                                    f.n > 0 ? f.n : 128);
    }
    if (!f.eps.empty()) cfg.eps_list = f.eps;
    if (!f.outdir.empty()) cfg.outdir = f.outdir;
    if (f.seed) cfg.seed = *f.seed;
    cfg.validate();
    return cfg;
}

int finish(const polar::ExperimentReport& rep, const polar::ExperimentConfig& cfg) {
    rep.write_summary(std::cout);
    if (!cfg.outdir.empty()) rep.write_files(cfg.outdir);
    return rep.passed() ? 0 : 1;
}

int cmd_lambda(const polar::ExperimentConfig& cfg) {
    const polar::Scenario sc = polar::preset_scenario(cfg.scenario, cfg.n);
    const polar::VariationalReport r = polar::analyze(sc.g, sc.data);
    std::printf("scenario %s, n = %d\n", cfg.scenario.c_str(), cfg.n);
    std::printf("lambda0 = %.12f\n", r.lambda0);
    std::printf("Lambda  = %.12f\n", r.big_lambda);
    std::printf("regime  = %s\n", polar::to_string(r.regime.tag));
    std::printf("|A*|    = %.6f\n", r.maximizer.area());
    std::printf("%s\n%s\n", polar::VariationalReport::csv_header().c_str(), r.csv_row().c_str());
    if (!cfg.outdir.empty()) {
        std::filesystem::create_directories(cfg.outdir);
        std::ofstream os(cfg.outdir / "lambda.csv");
        os << polar::VariationalReport::csv_header() << '\n' << r.csv_row() << '\n';
    }
    return 0;
}

// Plain trajectories for every eps; nondegenerate data start from the collar.
int cmd_run(const polar::ExperimentConfig& cfg) {
    const polar::Scenario sc = polar::preset_scenario(cfg.scenario, cfg.n);
    const polar::VariationalReport r = polar::analyze(sc.g, sc.data);
    std::printf("scenario %s, n = %d, regime %s, lambda0 %.6f, Lambda %.6f\n", cfg.scenario.c_str(), cfg.n,
                polar::to_string(r.regime.tag), r.lambda0, r.big_lambda);
    for (double eps : cfg.eps_list) {
        const polar::PreparedRun run = polar::prepare_run(sc.data, sc.g, cfg.solver, eps);
        const polar::Trajectory tr = polar::run_regularized(run.u, sc.g, run.params);
        const double drift = std::abs(tr.mass.back() - tr.mass.front()) / tr.mass.front();
        std::printf("eps %g: %zu records, lambda(T) %.6f, support area(T) %.6f, mass drift %.3g\n", eps, tr.size(),
                    tr.lambda.back(), tr.support_area.back(), drift);
        if (!cfg.outdir.empty()) {
            std::ostringstream name;
            name << "trajectory_eps" << eps;
            std::filesystem::create_directories(cfg.outdir);
            std::ofstream os(cfg.outdir / (name.str() + ".csv"));
            tr.write_csv(os);
            if (!tr.snapshots.empty()) tr.write_snapshots(cfg.outdir, name.str());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mass-conserving obstacle problem experiments"};
    app.require_subcommand(1);

    Flags flags;
    struct Entry {
        const char* name;
        const char* help;
        const char* scenario;
    };
    const Entry entries[] = {
        {"run", "integrate trajectories and write them as CSV", "continuity"},
        {"lambda", "print lambda0, Lambda and the regime", "continuity"},
        {"continuity", "support and multiplier continuity", "continuity"},
        {"growth", "support growth rate", "continuity"},
        {"jump", "initial jump to the maximizer", "jump"},
        {"classical", "classical obstacle problem with a source", "classical"},
        {"selftest", "fast property checks of every module", "continuity"},
    };
    std::vector<CLI::App*> subs;
    for (const Entry& e : entries) {
        subs.push_back(app.add_subcommand(e.name, e.help));
        add_flags(subs.back(), flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t k = 0; k < subs.size(); ++k) {
            if (!subs[k]->parsed()) continue;
            const std::string name = entries[k].name;
            if (name == "selftest") {
                polar::ExperimentConfig cfg;
                cfg.seed = flags.seed.value_or(1);
                cfg.outdir = flags.outdir;
                return finish(polar::run_selftest(cfg.seed), cfg);
            }
            const polar::ExperimentConfig cfg = resolve(flags, entries[k].scenario);
            if (name == "lambda") return cmd_lambda(cfg);
            if (name == "run") return cmd_run(cfg);
            if (name == "continuity") return finish(polar::experiment_continuity(cfg), cfg);
            if (name == "growth") return finish(polar::experiment_growth(cfg), cfg);
            if (name == "jump") return finish(polar::experiment_jump(cfg), cfg);
            if (name == "classical") return finish(polar::experiment_classical(cfg), cfg);
        }
    } catch (const polar::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.code()) {
            case polar::ErrorCode::ConfigError:
            case polar::ErrorCode::UnknownScenario:
            case polar::ErrorCode::WrongRegime:
                return 2;
            default:
                return 1;
        }
    }
    return 1;
}
