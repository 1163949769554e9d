// hsflow: command-line front end.
//
//   hsflow verify [--trials N] [--seed S]
//   hsflow flow   --config PATH [--out DIR]
//   hsflow lift   --snapshot PATH
//   hsflow report --run DIR
//
// HSF_WORKERS sets the worker count. Exit codes: 0 pass, 1 validation
// failure, 2 numerical abort, 3 I/O.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hsflow/commands.hpp"
#include "hsflow/errors.hpp"

namespace {

// An unparsable HSF_WORKERS is a usage error, not a silent fallback.
void check_workers_env() {
    const char* env = std::getenv("HSF_WORKERS");
    if (!env) return;
    const std::string s(env);
    std::size_t used = 0;
    int n = 0;
    try {
        n = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || n < 1) throw hsflow::ValidationError("HSF_WORKERS must be a positive integer, got '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypersymplectic flow laboratory"};
    app.require_subcommand(1);

    int trials = 1000;
    std::uint64_t seed = 1;
    auto* verify = app.add_subcommand("verify", "Run the randomised identity suites");
    verify->add_option("--trials", trials, "Samples per identity")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "Generator seed");

    std::string config;
    std::string out;
    auto* flow = app.add_subcommand("flow", "Integrate the flow from a configuration file");
    flow->add_option("--config", config, "INI or JSON configuration")->required();
    flow->add_option("--out", out, "Run directory (overrides [output] dir)");

    std::string snapshot;
    auto* lift = app.add_subcommand("lift", "Check the G2 lift at sampled points of a snapshot");
    lift->add_option("--snapshot", snapshot, "HSF1 snapshot file")->required();

    std::string run_dir;
    auto* report = app.add_subcommand("report", "Summarise a run directory");
    report->add_option("--run", run_dir, "Run directory written by `flow`")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return hsflow::kExitValidation;
    }

    try {
        check_workers_env();
        if (*verify) return hsflow::cmd_verify(trials, seed, std::cout);
        if (*flow) {
            std::optional<std::filesystem::path> dir;
            if (!out.empty()) dir = out;
            return hsflow::cmd_flow(config, dir, std::cerr);
        }
        if (*lift) return hsflow::cmd_lift(snapshot, std::cout);
        if (*report) return hsflow::cmd_report(run_dir, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "hsflow: error: " << e.what() << '\n';
        return hsflow::exit_code_for(e);
    }
    return hsflow::kExitValidation;
}
