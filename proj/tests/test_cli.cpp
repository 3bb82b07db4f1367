#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tde/config.hpp"
#include "tde/errors.hpp"
#include "tde/experiment.hpp"

using namespace tde;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("tde_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(static_cast<bool>(out));
    out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, ',')) fields.push_back(f);
    return fields;
}

const char* kTinyTable =
    "process = ar1\n"
    "n = 50\n"
    "N = 3\n"
    "seed = 11\n";

std::vector<ExperimentConfig> tiny_experiments() { return parse_config(kTinyTable); }

#ifdef TDE_CLI_PATH
int run_cli(const std::string& args) {
    const std::string cmd = std::string(TDE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("run_table writes the risk table with its documented header") {
    const fs::path dir = fresh_dir("table");
    const auto reports = run_table(tiny_experiments(), dir.string());
    CHECK(reports.size() == 1);
    CHECK(reports[0].n == 50);
    CHECK(reports[0].replicates == 3);

    const auto lines = lines_of(slurp(dir / "risks.csv"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "process,family_x,family_y,n,N,pen_const,risk_emp,se_emp,risk_l2,se_l2,risk_f,se_f");
    const auto fields = fields_of(lines[1]);
    REQUIRE(fields.size() == 12);
    CHECK(fields[0] == "ar1");
    CHECK(fields[1] == "histogram");
    CHECK(fields[3] == "50");
    CHECK(std::stod(fields[6]) > 0.0);

    const std::string meta = slurp(dir / "risks.meta");
    CHECK(meta.rfind("config_hash=", 0) == 0);
    CHECK(meta.find("selected_dims=") != std::string::npos);
}

TEST_CASE("run_table output bytes depend only on the config") {
    const fs::path a = fresh_dir("table_a");
    const fs::path b = fresh_dir("table_b");
    run_table(tiny_experiments(), a.string());
    run_table(tiny_experiments(), b.string());
    CHECK(slurp(a / "risks.csv") == slurp(b / "risks.csv"));
    CHECK(slurp(a / "risks.meta") == slurp(b / "risks.meta"));
    CHECK_THROWS_AS(run_table({}, a.string()), config_error);
}

TEST_CASE("surface export walks the domain lattice against the true kernel") {
    const fs::path dir = fresh_dir("surface");
    const auto experiments = tiny_experiments();
    export_surface(experiments[0], 100, 3, dir.string());

    const auto lines = lines_of(slurp(dir / "surface.csv"));
    REQUIRE(lines.size() == 10);  // header + 3x3 lattice
    CHECK(lines[0] == "x,y,pi_true,pi_hat");
    bool seen_center = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = fields_of(lines[i]);
        REQUIRE(f.size() == 4);
        if (f[0] == "6" && f[1] == "6") {
            seen_center = true;
            // pi(6, 6) = standard normal density at zero
            CHECK(std::stod(f[2]) == doctest::Approx(0.39894228040143268).epsilon(1e-12));
        }
    }
    CHECK(seen_center);

    const fs::path dir2 = fresh_dir("surface2");
    export_surface(experiments[0], 100, 3, dir2.string());
    CHECK(slurp(dir / "surface.csv") == slurp(dir2 / "surface.csv"));
    CHECK_THROWS_AS(export_surface(experiments[0], 100, 1, dir.string()), input_error);
}

TEST_CASE("section export cuts the surface at a chosen point") {
    const fs::path dir = fresh_dir("sections");
    const auto experiments = tiny_experiments();
    export_sections(experiments[0], 100, 4.6, 5.0, 5, dir.string());

    const auto at_x = lines_of(slurp(dir / "section_at_x.csv"));
    const auto at_y = lines_of(slurp(dir / "section_at_y.csv"));
    REQUIRE(at_x.size() == 6);
    REQUIRE(at_y.size() == 6);
    CHECK(at_x[0] == "coord,pi_true,pi_hat");
    CHECK(at_y[0] == "coord,pi_true,pi_hat");
    CHECK(fields_of(at_x[1])[0] == "4");  // y sweep starts at the window edge
    CHECK(fields_of(at_x[5])[0] == "8");

    CHECK_THROWS_AS(export_sections(experiments[0], 100, 100.0, 5.0, 5, dir.string()),
                    input_error);
    CHECK_THROWS_AS(export_sections(experiments[0], 100, 4.6, -3.0, 5, dir.string()),
                    input_error);
    CHECK_THROWS_AS(export_sections(experiments[0], 100, 4.6, 5.0, 1, dir.string()), input_error);
}

TEST_CASE("selection trace lists one row per model and marks the minimizer") {
    const fs::path dir = fresh_dir("trace");
    export_selection_trace(tiny_experiments()[0], 100, dir.string());

    const auto lines = lines_of(slurp(dir / "selection.csv"));
    CHECK(lines[0] == "family_x,family_y,D1,D2,contrast,penalty,selected");
    REQUIRE(lines.size() == 10);  // header + 3x3 histogram dimension pairs for n=100
    int selected = 0;
    double best = 1e300, chosen = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = fields_of(lines[i]);
        REQUIRE(f.size() == 7);
        CHECK(f[0] == "histogram");
        const double value = std::stod(f[4]) + std::stod(f[5]);
        if (value < best) best = value;
        if (f[6] == "1") {
            ++selected;
            chosen = value;
        }
    }
    CHECK(selected == 1);
    CHECK(chosen == doctest::Approx(best));
}

TEST_CASE("cell seeds mix the master seed with the sample size") {
    auto splitmix64 = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    for (std::uint64_t master : {0ULL, 1ULL, 42ULL}) {
        for (int n : {8, 50, 1000}) {
            CHECK(cell_seed(master, n) ==
                  splitmix64(master ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL)));
        }
    }
    CHECK(cell_seed(1, 50) != cell_seed(1, 100));
    CHECK(cell_seed(1, 50) != cell_seed(2, 50));
}

#ifdef TDE_CLI_PATH

TEST_CASE("cli runs a table end to end and reports success") {
    const fs::path dir = fresh_dir("cli_ok");
    write_text(dir / "exp.conf", kTinyTable);
    const int code = run_cli("table --config " + (dir / "exp.conf").string() + " --out " +
                             (dir / "out").string());
    CHECK(code == 0);
    CHECK(fs::exists(dir / "out" / "risks.csv"));
    CHECK(fs::exists(dir / "out" / "risks.meta"));
}

TEST_CASE("cli separates config errors from runtime errors") {
    const fs::path dir = fresh_dir("cli_err");

    // unreadable config
    CHECK(run_cli("table --config " + (dir / "missing.conf").string()) == 1);

    // malformed config content
    write_text(dir / "bad.conf", "frobnicate = 1\n");
    CHECK(run_cli("table --config " + (dir / "bad.conf").string() + " --out " + dir.string()) ==
          1);

    // flag parse failure
    CHECK(run_cli("table") == 1);
    CHECK(run_cli("no-such-command --config x") == 1);

    // runtime failure: the output directory collides with a regular file
    write_text(dir / "exp.conf", kTinyTable);
    write_text(dir / "blocker", "");
    CHECK(run_cli("table --config " + (dir / "exp.conf").string() + " --out " +
                  (dir / "blocker" / "sub").string()) == 2);

    // runtime failure: section point outside the estimation window
    CHECK(run_cli("sections --config " + (dir / "exp.conf").string() + " --x0 100 --y0 5 --out " +
                  dir.string()) == 2);
}

TEST_CASE("cli sub-commands cover the single-fit exports") {
    const fs::path dir = fresh_dir("cli_exports");
    write_text(dir / "exp.conf", kTinyTable);
    const std::string common =
        " --config " + (dir / "exp.conf").string() + " --out " + dir.string();
    CHECK(run_cli("surface --n 100 --grid 3" + common) == 0);
    CHECK(fs::exists(dir / "surface.csv"));
    CHECK(run_cli("sections --n 100 --x0 4.6 --y0 5 --points 5" + common) == 0);
    CHECK(fs::exists(dir / "section_at_x.csv"));
    CHECK(fs::exists(dir / "section_at_y.csv"));
    CHECK(run_cli("select-trace --n 100" + common) == 0);
    CHECK(fs::exists(dir / "selection.csv"));
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli seed override changes the table bytes") {
    const fs::path dir = fresh_dir("cli_seed");
    write_text(dir / "exp.conf", kTinyTable);
    const std::string base = "table --config " + (dir / "exp.conf").string();
    CHECK(run_cli(base + " --out " + (dir / "a").string()) == 0);
    CHECK(run_cli(base + " --seed 77 --out " + (dir / "b").string()) == 0);
    CHECK(run_cli(base + " --seed 77 --out " + (dir / "c").string()) == 0);
    CHECK(slurp(dir / "a" / "risks.csv") != slurp(dir / "b" / "risks.csv"));
    CHECK(slurp(dir / "b" / "risks.csv") == slurp(dir / "c" / "risks.csv"));
}

#endif  // TDE_CLI_PATH
