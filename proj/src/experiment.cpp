#include "tde/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tde/errors.hpp"

namespace tde {
namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

struct SingleFit {
    ChainSpec spec;
    Fit fit;
};

// One truncated fit at the experiment's seed, shared by the export commands.
SingleFit single_fit(const ExperimentConfig& experiment, int n) {
    const ChainSpec spec = experiment.chain();
    const Path path = simulate(spec, n, experiment.seed);
    const std::vector<Model> models = model_collection(
        experiment.family_x, experiment.family_y, n, experiment.domain, experiment.isotropic);
    Selection sel = select_model(models, path, experiment.penalty());
    return {spec, truncate(sel.fit)};
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, int n) {
    return splitmix64(master ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL));
}

std::string risk_csv(const std::vector<RiskReport>& reports) {
    std::string out =
        "process,family_x,family_y,n,N,pen_const,risk_emp,se_emp,risk_l2,se_l2,risk_f,se_f\n";
    for (const RiskReport& r : reports) {
        out += r.process + "," + r.family_x + "," + r.family_y + "," + std::to_string(r.n) + "," +
               std::to_string(r.replicates) + "," + format_double(r.pen_const) + "," +
               format_double(r.mean_empirical) + "," + format_double(r.se_empirical) + "," +
               format_double(r.mean_l2) + "," + format_double(r.se_l2) + "," +
               format_double(r.mean_f) + "," + format_double(r.se_f) + "\n";
    }
    return out;
}

std::vector<RiskReport> run_table(const std::vector<ExperimentConfig>& experiments,
                                  const std::string& out_dir, int threads) {
    if (experiments.empty()) throw config_error("config defines no experiments");
    std::vector<RiskReport> reports;
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(experiments)));
    std::string meta = std::string("config_hash=") + hash_buf + "\n";
    for (const ExperimentConfig& experiment : experiments) {
        const ChainSpec spec = experiment.chain();
        McOptions options;
        options.quad_points = experiment.quad_points;
        options.isotropic = experiment.isotropic;
        options.domain = experiment.domain;
        options.threads = threads;
        for (int n : experiment.n_values) {
            const std::uint64_t seed = cell_seed(experiment.seed, n);
            RiskReport report =
                mc_risk(spec, experiment.family_x, experiment.family_y, n, experiment.replicates,
                        experiment.penalty(), seed, options);
            meta += "[cell experiment=" + experiment.name + " process=" + report.process +
                    " family_x=" + report.family_x + " family_y=" + report.family_y +
                    " n=" + std::to_string(n) + "]\n";
            meta += "seed=" + std::to_string(seed) + "\n";
            meta += "selected_dims=";
            for (const DimensionCount& d : report.selected_dims)
                meta += " " + std::to_string(d.dim_x) + "x" + std::to_string(d.dim_y) + ":" +
                        std::to_string(d.count);
            meta += "\n";
            reports.push_back(std::move(report));
        }
    }
    write_file(out_dir, "risks.csv", risk_csv(reports));
    write_file(out_dir, "risks.meta", meta);
    return reports;
}

void export_surface(const ExperimentConfig& experiment, int n, int grid,
                    const std::string& out_dir) {
    if (grid < 2) throw input_error("surface grid must have at least 2 points per axis");
    const SingleFit sf = single_fit(experiment, n);
    const Rectangle domain = experiment.domain;
    std::string out = "x,y,pi_true,pi_hat\n";
    for (int i = 0; i < grid; ++i) {
        const double x = domain.x.lo + domain.x.length() * i / (grid - 1);
        for (int j = 0; j < grid; ++j) {
            const double y = domain.y.lo + domain.y.length() * j / (grid - 1);
            out += format_double(x) + "," + format_double(y) + "," +
                   format_double(transition_density(sf.spec, x, y)) + "," +
                   format_double(evaluate(sf.fit, x, y)) + "\n";
        }
    }
    write_file(out_dir, "surface.csv", out);
}

void export_sections(const ExperimentConfig& experiment, int n, double x0, double y0, int points,
                     const std::string& out_dir) {
    if (points < 2) throw input_error("sections need at least 2 points");
    const Rectangle domain = experiment.domain;
    if (!domain.x.contains(x0)) throw input_error("x0 is outside the estimation window");
    if (!domain.y.contains(y0)) throw input_error("y0 is outside the estimation window");
    const SingleFit sf = single_fit(experiment, n);

    std::string at_x = "coord,pi_true,pi_hat\n";
    for (int j = 0; j < points; ++j) {
        const double y = domain.y.lo + domain.y.length() * j / (points - 1);
        at_x += format_double(y) + "," + format_double(transition_density(sf.spec, x0, y)) + "," +
                format_double(evaluate(sf.fit, x0, y)) + "\n";
    }
    write_file(out_dir, "section_at_x.csv", at_x);

    std::string at_y = "coord,pi_true,pi_hat\n";
    for (int i = 0; i < points; ++i) {
        const double x = domain.x.lo + domain.x.length() * i / (points - 1);
        at_y += format_double(x) + "," + format_double(transition_density(sf.spec, x, y0)) + "," +
                format_double(evaluate(sf.fit, x, y0)) + "\n";
    }
    write_file(out_dir, "section_at_y.csv", at_y);
}

void export_selection_trace(const ExperimentConfig& experiment, int n,
                            const std::string& out_dir) {
    const ChainSpec spec = experiment.chain();
    const Path path = simulate(spec, n, experiment.seed);
    const std::vector<Model> models = model_collection(
        experiment.family_x, experiment.family_y, n, experiment.domain, experiment.isotropic);
    const Selection sel = select_model(models, path, experiment.penalty());
    std::string out = "family_x,family_y,D1,D2,contrast,penalty,selected\n";
    for (const ModelDiagnostic& d : sel.diagnostics) {
        out += experiment.family_x.name() + "," + experiment.family_y.name() + "," +
               std::to_string(d.dim_x) + "," + std::to_string(d.dim_y) + "," +
               format_double(d.contrast) + "," + format_double(d.penalty) + "," +
               (d.selected ? "1" : "0") + "\n";
    }
    write_file(out_dir, "selection.csv", out);
}

}  // namespace tde
