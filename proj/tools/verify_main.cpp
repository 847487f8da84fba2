#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "asg/experiment.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string format;  // empty = from config
    std::string out;     // empty = from config
    std::string forced_experiment;
};

int run_once(const Options& opt) {
    asg::ExperimentConfig cfg = asg::load_config(opt.config_path);
    if (!opt.forced_experiment.empty()) cfg.experiment = opt.forced_experiment;
    if (!opt.format.empty()) cfg.format = opt.format;
    if (!opt.out.empty()) cfg.out = opt.out;

    const asg::RunReport report = asg::run(cfg);
    const std::string bytes = asg::emit(report, cfg.format);
    if (cfg.out == "-" || cfg.out.empty()) {
        std::cout << bytes;
    } else {
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os) throw asg::IoError("cannot open output: " + cfg.out);
        os << bytes;
    }
    return report.all_pass() ? 0 : 1;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config_path, "experiment config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--format", opt.format, "json or csv (overrides config)");
    cmd->add_option("--out", opt.out, "output path, '-' for stdout (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification of mean-value identities for the "
                 "ultra-hyperbolic equation on R^{2,2} and oriented-line space"};
    app.require_subcommand(1);

    Options opt;
    // generic runner: the experiment kind comes from the config file
    CLI::App* generic = app.add_subcommand(
        "asgeirsson", "run the experiment selected by the config file");
    add_common(generic, opt);

    // one subcommand per experiment kind, overriding the config's selector
    static const char* kinds[] = {"asgeirsson-circle", "asgeirsson-hyperbola",
                                  "uhe-residual",      "xray-compare",
                                  "ruled-surface",     "map-triple",
                                  "chart-roundtrip"};
    for (const char* kind : kinds) {
        CLI::App* cmd = app.add_subcommand(kind, std::string("run the ") + kind + " experiment");
        add_common(cmd, opt);
        cmd->callback([&opt, kind]() { opt.forced_experiment = kind; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run_once(opt);
    } catch (const asg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const asg::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const asg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
