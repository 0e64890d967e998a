#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bingham2d/runner.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    std::optional<bingham2d::RunMode> mode_override;
};

int execute(const CliArgs& args) {
    bingham2d::RunConfig cfg;
    try {
        cfg = bingham2d::RunConfig::from_json_file(args.config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    if (args.mode_override) cfg.mode = *args.mode_override;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed >= 0) cfg.seed = static_cast<unsigned>(args.seed);
    return bingham2d::run_config(cfg);
}

void add_run_options(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("config", args.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
    cmd->add_option("--seed", args.seed, "RNG seed (overrides the config)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"staggered-grid Bingham flow solver and verification harness"};
    app.require_subcommand(1);

    CliArgs args;

    CLI::App* run = app.add_subcommand("run", "run a config in its own mode");
    add_run_options(run, args);

    const std::pair<const char*, bingham2d::RunMode> modes[] = {
        {"stationary", bingham2d::RunMode::Stationary},
        {"evolve", bingham2d::RunMode::Evolve},
        {"eps-study", bingham2d::RunMode::EpsStudy},
        {"grid-study", bingham2d::RunMode::GridStudy},
        {"frame-check", bingham2d::RunMode::FrameCheck},
    };
    for (const auto& [name, mode] : modes) {
        CLI::App* cmd = app.add_subcommand(
            name, std::string("run a config with mode forced to ") + name);
        add_run_options(cmd, args);
        cmd->callback([&args, m = mode]() { args.mode_override = m; });
    }

    CLI11_PARSE(app, argc, argv);
    return execute(args);
}
