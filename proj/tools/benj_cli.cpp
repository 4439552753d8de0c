// command-line front end: every subcommand reads a flat key = value config,
// runs one experiment, writes report.json / report.txt (plus CSV artifacts)
// into the output directory and exits 0 only if every pass/fail clause held.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "benj/experiments.hpp"

namespace {

const std::vector<std::pair<std::string, std::string>> kSubcommands = {
    {"solve", "integrate one datum and tabulate the requested diagnostics"},
    {"conservation", "check the conserved quantities and the first-moment law"},
    {"tstar", "locate the sign-change time of the tail plateau"},
    {"pair", "evolve a matched (or deliberately mismatched) pair of data"},
    {"bounds", "evaluate the inequality check suite"},
    {"symbolic-verify", "diff the symbolic derivative expansions against transcriptions"},
    {"uniqueness-cert", "tabulate the rigidity quantities for a perturbed datum"},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral laboratory for a nonlocal dispersive equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed = 0;
    bool show_keys = false;

    for (const auto& [name, description] : kSubcommands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config_path, "configuration file (key = value lines)");
        sub->add_option("--out", out_dir, "output directory (default out/<subcommand>)");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_flag("--keys", show_keys, "print the valid config keys and exit");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string kind = app.get_subcommands().front()->get_name();

    try {
        if (show_keys) {
            for (const auto& key : benj::valid_keys(kind)) std::cout << key << "\n";
            return 0;
        }
        benj::Config cfg;
        if (!config_path.empty()) cfg = benj::Config::load(config_path);
        if (app.get_subcommands().front()->count("--seed") > 0)
            cfg.set("seed", std::to_string(seed));
        if (out_dir.empty()) out_dir = "out/" + kind;

        const benj::ExperimentResult result = benj::run_experiment(kind, cfg, out_dir);
        std::cout << result.text;
        std::cout << "report: " << out_dir << "/report.json\n";
        return result.all_pass ? 0 : 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
