#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"

#include "cli_util.hpp"

namespace {

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("NEHARI_FLOW_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 0;  // library default: hardware concurrency
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nhflow: nonlocal parabolic flow laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool corrupt_kernel = false;

    app.add_option("--config", config_path, "experiment config JSON");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "random seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--threads", threads,
                   "worker threads (fallback: env NEHARI_FLOW_THREADS)");
    app.add_flag("--corrupt-kernel", corrupt_kernel,
                 "test hook: inject a negative kernel weight before selftest")
        ->group("");  // hidden

    CLI::App* c_sim = app.add_subcommand("simulate", "run the flow and write traces");
    CLI::App* c_sta = app.add_subcommand("stationary", "solve the stationary problem");
    CLI::App* c_dep = app.add_subcommand("depth", "estimate the potential-well depth");
    CLI::App* c_con = app.add_subcommand("construct", "build special initial data");
    CLI::App* c_swp = app.add_subcommand("sweep", "scale sweep of the initial datum");
    CLI::App* c_slf = app.add_subcommand("selftest", "reduced acceptance suite");

    CLI11_PARSE(app, argc, argv);

    nhfcli::CliContext ctx;
    try {
        if (!config_path.empty()) {
            ctx.cfg = nhfcli::ExperimentConfig::from_file(config_path);
        } else if (!app.got_subcommand(c_slf)) {
            std::fprintf(stderr, "error: --config is required for this command\n");
            return 2;
        }
        if (seed_set) ctx.cfg.seed = seed;
        ctx.out_dir = !out_dir.empty() ? out_dir : ctx.cfg.output_dir;
        ctx.threads = resolve_threads(threads);
        ctx.corrupt_kernel = corrupt_kernel;
        ctx.cfg.validate();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        if (app.got_subcommand(c_sim)) return nhfcli::cmd_simulate(ctx);
        if (app.got_subcommand(c_sta)) return nhfcli::cmd_stationary(ctx);
        if (app.got_subcommand(c_dep)) return nhfcli::cmd_depth(ctx);
        if (app.got_subcommand(c_con)) return nhfcli::cmd_construct(ctx);
        if (app.got_subcommand(c_swp)) return nhfcli::cmd_sweep(ctx);
        if (app.got_subcommand(c_slf)) return nhfcli::cmd_selftest(ctx);
    } catch (const nhfcli::CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
