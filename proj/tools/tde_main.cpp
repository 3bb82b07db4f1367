#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tde/config.hpp"
#include "tde/errors.hpp"
#include "tde/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file")->required();
    cmd->add_option("--seed", args.seed, "override the seed of every experiment");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--threads", args.threads, "worker threads for replicates")
        ->check(CLI::PositiveNumber);
}

std::vector<tde::ExperimentConfig> load(const CommonArgs& args) {
    std::vector<tde::ExperimentConfig> experiments = tde::parse_config_file(args.config_path);
    if (args.seed)
        for (tde::ExperimentConfig& e : experiments) e.seed = *args.seed;
    return experiments;
}

// Single-fit commands operate on one experiment; --experiment picks it by
// section name when the config holds several.
const tde::ExperimentConfig& pick(const std::vector<tde::ExperimentConfig>& experiments,
                                  const std::string& name) {
    if (name.empty()) {
        if (experiments.size() == 1) return experiments.front();
        throw tde::config_error("config has several sections; pass --experiment NAME");
    }
    for (const tde::ExperimentConfig& e : experiments)
        if (e.name == name) return e;
    throw tde::config_error("no section named '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"penalized projection estimation of Markov transition densities"};
    app.require_subcommand(1);

    CommonArgs table_args;
    CLI::App* table = app.add_subcommand("table", "Monte-Carlo risk table over all experiments");
    add_common(table, table_args);

    CommonArgs surface_args;
    std::string surface_experiment;
    int surface_n = 1000;
    int surface_grid = 60;
    CLI::App* surface = app.add_subcommand("surface", "estimator surface on one path");
    add_common(surface, surface_args);
    surface->add_option("--experiment", surface_experiment, "section name");
    surface->add_option("--n", surface_n, "path length")->check(CLI::PositiveNumber);
    surface->add_option("--grid", surface_grid, "lattice points per axis");

    CommonArgs sections_args;
    std::string sections_experiment;
    int sections_n = 1000;
    int sections_points = 200;
    double x0 = 0.0, y0 = 0.0;
    CLI::App* sections = app.add_subcommand("sections", "true and fitted sections of one fit");
    add_common(sections, sections_args);
    sections->add_option("--experiment", sections_experiment, "section name");
    sections->add_option("--n", sections_n, "path length")->check(CLI::PositiveNumber);
    sections->add_option("--points", sections_points, "points per section");
    sections->add_option("--x0", x0, "abscissa of the y section")->required();
    sections->add_option("--y0", y0, "ordinate of the x section")->required();

    CommonArgs trace_args;
    std::string trace_experiment;
    int trace_n = 1000;
    CLI::App* trace = app.add_subcommand("select-trace", "per-model contrast and penalty of one fit");
    add_common(trace, trace_args);
    trace->add_option("--experiment", trace_experiment, "section name");
    trace->add_option("--n", trace_n, "path length")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*table) {
            tde::run_table(load(table_args), table_args.out_dir, table_args.threads);
        } else if (*surface) {
            const auto experiments = load(surface_args);
            tde::export_surface(pick(experiments, surface_experiment), surface_n, surface_grid,
                                surface_args.out_dir);
        } else if (*sections) {
            const auto experiments = load(sections_args);
            tde::export_sections(pick(experiments, sections_experiment), sections_n, x0, y0,
                                 sections_points, sections_args.out_dir);
        } else if (*trace) {
            const auto experiments = load(trace_args);
            tde::export_selection_trace(pick(experiments, trace_experiment), trace_n,
                                        trace_args.out_dir);
        }
    } catch (const tde::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
