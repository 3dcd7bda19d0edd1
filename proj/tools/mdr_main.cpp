#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdr/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Optimal mismatched-disturbance rejection: scenario runner and Riccati tools"};
    app.require_subcommand(1);

    std::string scenario;
    std::optional<std::string> out_dir;
    auto* run = app.add_subcommand("run", "simulate every controller of a scenario and write CSV/SVG/summary files");
    run->add_option("scenario", scenario, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default: $MDR_OUT_DIR or the current directory)");

    std::vector<std::string> summaries;
    auto* compare = app.add_subcommand("compare", "tabulate one or more summary files of the same scenario");
    compare->add_option("summaries", summaries, "summary JSON files")->required();
    compare->add_option("--out", out_dir, "directory for the comparison CSV");

    auto* gare = app.add_subcommand("gare", "solve the stationary Riccati equation for a scenario");
    gare->add_option("scenario", scenario, "scenario JSON file")->required();

    std::size_t count = 100;
    std::uint64_t seed = 20240607;
    auto* selftest = app.add_subcommand("selftest", "run the oracle-equivalence property suite");
    selftest->add_option("--count", count, "number of random instances");
    selftest->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mdr::cli::kValidationError;
    }

    if (run->parsed()) return mdr::cli::run(scenario, mdr::cli::resolve_out_dir(out_dir), std::cout, std::cerr);
    if (compare->parsed()) {
        std::vector<std::filesystem::path> paths(summaries.begin(), summaries.end());
        return mdr::cli::compare(paths, mdr::cli::resolve_out_dir(out_dir), std::cout, std::cerr);
    }
    if (gare->parsed()) return mdr::cli::gare(scenario, std::cout, std::cerr);
    if (selftest->parsed()) return mdr::cli::selftest(count, seed, std::cout, std::cerr);
    return mdr::cli::kValidationError;
}
