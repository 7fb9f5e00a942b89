// Experiment runner: one subcommand per experiment kind, each driven by a
// flat key-value config file. Artifacts (diagnostics CSV, JSON summary) land
// in --out. Exit status: 0 all enabled checks passed, 1 a check failed,
// 2 configuration or runtime error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dinls/config.hpp"
#include "dinls/experiment.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;
    bool strict = false;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory for CSV/JSON artifacts");
    sub->add_option("--jobs", opts.jobs, "max concurrent sweep entries")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--strict", opts.strict, "fail on any warning (e.g. unknown config keys)");
}

int run_kind(const std::string& kind, const CommonOpts& opts) {
    dinls::Config cfg = dinls::Config::from_file(opts.config_path);
    if (cfg.has("kind")) {
        const std::string file_kind = cfg.get_string("kind");
        if (file_kind != kind)
            throw std::runtime_error(cfg.name() + ": kind: config says '" + file_kind +
                                     "' but the subcommand is '" + kind + "'");
    } else {
        cfg.set("kind", kind);
    }

    const dinls::ExperimentResult res =
        dinls::run_experiment(cfg, opts.out_dir, opts.jobs, opts.strict);
    for (const auto& c : res.checks)
        std::printf("%-28s %s  measured=%.6g limit=%.6g%s%s\n", c.name.c_str(),
                    c.pass ? "pass" : "FAIL", c.measured, c.limit,
                    c.note.empty() ? "" : "  ", c.note.c_str());
    std::printf("%s: %s\n", kind.c_str(), res.status == 0 ? "PASS" : "FAIL");
    return res.status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and verification workbench for the damped inhomogeneous NLS"};
    app.require_subcommand(1);

    const std::vector<std::string> kinds = {"simulate",       "blowup-verify", "lifespan-verify",
                                            "scatter-verify", "groundstate",   "sweep"};
    std::vector<CommonOpts> opts(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        CLI::App* sub = app.add_subcommand(kinds[i], kinds[i] + " experiment");
        add_common(sub, opts[i]);
        sub->callback([&app]() { (void)app; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (std::size_t i = 0; i < kinds.size(); ++i)
            if (app.got_subcommand(kinds[i])) return run_kind(kinds[i], opts[i]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
