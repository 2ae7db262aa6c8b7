#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "infheat/barriers.hpp"
#include "infheat/parallel.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"infheat: normalized infinity-heat experiments"};
    app.require_subcommand(1);

    int threads = 0;
    if (const char* env = std::getenv("INFHEAT_THREADS")) threads = std::atoi(env);
    app.add_option("--threads", threads, "worker threads (default: $INFHEAT_THREADS or all cores)");

    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::string config;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config, "JSON experiment config")->required();
    run->add_option("--out", out_dir, "output directory");
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");

    app.add_subcommand("list-catalog", "print the barrier catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    infheat::set_thread_count(threads);

    if (app.got_subcommand("list-catalog")) {
        std::cout << infheat::catalog_text();
        return 0;
    }
    infheat::cli::RunOptions opt;
    opt.out_dir = out_dir;
    if (seed_opt->count() > 0) opt.seed = seed;
    return infheat::cli::run_file(config, opt, std::cout, std::cerr);
}
