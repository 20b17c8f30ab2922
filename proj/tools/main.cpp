#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "vncs/errors.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    int workers = 0;
    bool strict = false;
    bool seedless = false;
    bool quiet = false;
    std::vector<std::string> sets;
    std::size_t max_points = 0;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("-c,--config", c.config, "Run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", c.out, "Output directory (overrides output_dir)");
    sub->add_option("-w,--workers", c.workers, "Worker threads (overrides workers)")->check(CLI::PositiveNumber);
    sub->add_option("--set", c.sets, "Override a configuration key, e.g. --set scan.omega_count=100");
    sub->add_flag("--strict", c.strict, "Exit with status 3 if any point fails");
    sub->add_flag("--seedless", c.seedless, "Reserved and rejected: runs draw no random numbers");
    sub->add_flag("-q,--quiet", c.quiet, "Suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace vncs::cli;
    CLI::App app{"Vortex nonlinear Compton scattering in multi-color circularly polarized pulses"};
    app.require_subcommand(1, 1);

    Common c;
    auto* plan = app.add_subcommand("plan", "Write the channel atlas and degeneracy list");
    auto* scan = app.add_subcommand("scan", "Compute vortex-mode resolved spectra");
    auto* profile = app.add_subcommand("profile", "Write transverse intensity and phase profiles");
    auto* report = app.add_subcommand("report", "Analyse spectra written by scan");
    for (auto* sub : {plan, scan, profile, report}) add_common(sub, c);
    scan->add_option("--max-points", c.max_points, "Stop after this many new points; rerun to resume");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitFailure;
    }

    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "error: --set expects key=value, got '" << s << "'\n";
            return kExitConfig;
        }
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!c.out.empty()) {
        std::string text = "\"";
        for (char ch : c.out) {
            if (ch == '"' || ch == '\\') text += '\\';
            text += ch;
        }
        overrides.emplace_back("output_dir", text + '"');
    }
    if (c.workers > 0) overrides.emplace_back("workers", std::to_string(c.workers));
    if (c.seedless) {
        std::cerr << "error: --seedless: this tool draws no random numbers; nothing to disable\n";
        return kExitConfig;
    }

    try {
        const RunConfig config = load_config(c.config, overrides);
        const CommandOptions options{c.strict, c.max_points, c.quiet};
        if (*plan) return run_plan(config, options, std::cerr);
        if (*scan) return run_scan(config, options, std::cerr);
        if (*profile) return run_profile(config, options, std::cerr);
        return run_report(config, options, std::cerr);
    } catch (const vncs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
