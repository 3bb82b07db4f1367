#include "tde/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tde/errors.hpp"

namespace tde {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw config_error(key + ": expected a number, got '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error(key + ": expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_uint64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error(key + ": expected an unsigned integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw config_error(key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> split_ws(const std::string& value) {
    std::istringstream in(value);
    std::vector<std::string> parts;
    std::string tok;
    while (in >> tok) parts.push_back(tok);
    return parts;
}

std::string canonical_process(const std::string& value) {
    if (value == "ar1") return "ar1";
    if (value == "radial_ou" || value == "sqrt_cir") return "radial_ou";
    if (value == "arch") return "arch";
    throw config_error("process: unknown process '" + value + "'");
}

Rectangle process_default_domain(const std::string& process) {
    if (process == "ar1") return {{4.0, 8.0}, {4.0, 8.0}};
    if (process == "radial_ou") return {{2.0, 10.0}, {2.0, 10.0}};
    return {{-6.0, 6.0}, {-6.0, 6.0}};
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "process") {
        cfg.process = canonical_process(value);
        if (!cfg.domain_given) cfg.domain = process_default_domain(cfg.process);
    } else if (key == "a") {
        cfg.a = parse_double(key, value);
    } else if (key == "b") {
        cfg.b = parse_double(key, value);
    } else if (key == "sigma") {
        cfg.sigma = parse_double(key, value);
    } else if (key == "beta") {
        cfg.beta = parse_double(key, value);
    } else if (key == "burn_in") {
        cfg.burn_in = parse_int(key, value);
    } else if (key == "domain") {
        const auto parts = split_ws(value);
        if (parts.size() != 4)
            throw config_error("domain: expected 'x_lo x_hi y_lo y_hi', got '" + value + "'");
        cfg.domain = {{parse_double(key, parts[0]), parse_double(key, parts[1])},
                      {parse_double(key, parts[2]), parse_double(key, parts[3])}};
        cfg.domain_given = true;
    } else if (key == "family_x") {
        cfg.family_x = BasisFamily::parse(value);
    } else if (key == "family_y") {
        cfg.family_y = BasisFamily::parse(value);
    } else if (key == "n") {
        const auto parts = split_ws(value);
        cfg.n_values.clear();
        for (const auto& p : parts) cfg.n_values.push_back(parse_int(key, p));
    } else if (key == "N") {
        cfg.replicates = parse_int(key, value);
    } else if (key == "penalty_mode") {
        if (value == "fixed")
            cfg.penalty_mode = PenaltyMode::fixed;
        else if (value == "simulation")
            cfg.penalty_mode = PenaltyMode::simulation;
        else if (value == "random")
            cfg.penalty_mode = PenaltyMode::random;
        else
            throw config_error("penalty_mode: unknown mode '" + value + "'");
    } else if (key == "penalty_constant") {
        cfg.penalty_constant = parse_double(key, value);
    } else if (key == "sup_norm_bound") {
        cfg.sup_norm_bound = parse_double(key, value);
    } else if (key == "pilot_grid") {
        cfg.pilot_grid = parse_int(key, value);
    } else if (key == "isotropic") {
        cfg.isotropic = parse_bool(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_uint64(key, value);
    } else if (key == "quad_points") {
        cfg.quad_points = parse_int(key, value);
    } else {
        throw config_error("unknown key '" + key + "'");
    }
}

void validate(const ExperimentConfig& cfg) {
    auto fail = [&](const std::string& msg) { throw config_error("[" + cfg.name + "] " + msg); };
    if (cfg.n_values.empty()) fail("n: list must not be empty");
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
        if (cfg.n_values[i] < 8) fail("n: sample sizes must be >= 8");
        if (i > 0 && cfg.n_values[i] <= cfg.n_values[i - 1])
            fail("n: sample sizes must be strictly increasing");
    }
    if (cfg.replicates < 1) fail("N: must be >= 1");
    if (!(cfg.penalty_constant > 0.0)) fail("penalty_constant: must be > 0");
    if (!(cfg.sup_norm_bound > 0.0)) fail("sup_norm_bound: must be > 0");
    if (cfg.pilot_grid < 1) fail("pilot_grid: must be >= 1");
    if (cfg.quad_points < 2) fail("quad_points: must be >= 2");
    if (cfg.burn_in < 0) fail("burn_in: must be >= 0");
    if (!(cfg.domain.x.lo < cfg.domain.x.hi) || !(cfg.domain.y.lo < cfg.domain.y.hi))
        fail("domain: intervals must have positive length");
    try {
        (void)cfg.chain();
    } catch (const std::exception& e) {
        fail(std::string("process parameters: ") + e.what());
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ChainSpec ExperimentConfig::chain() const {
    if (process == "ar1") return ChainSpec::ar1(a, b, sigma);
    if (process == "radial_ou") return ChainSpec::radial_ou(a, beta);
    return ChainSpec::arch(burn_in);
}

PenaltyConfig ExperimentConfig::penalty() const {
    return {penalty_mode, penalty_constant, sup_norm_bound, pilot_grid};
}

bool operator==(const ExperimentConfig& lhs, const ExperimentConfig& rhs) {
    return lhs.name == rhs.name && lhs.process == rhs.process && lhs.a == rhs.a &&
           lhs.b == rhs.b && lhs.sigma == rhs.sigma && lhs.beta == rhs.beta &&
           lhs.burn_in == rhs.burn_in && lhs.domain == rhs.domain &&
           lhs.family_x == rhs.family_x && lhs.family_y == rhs.family_y &&
           lhs.n_values == rhs.n_values && lhs.replicates == rhs.replicates &&
           lhs.penalty_mode == rhs.penalty_mode && lhs.penalty_constant == rhs.penalty_constant &&
           lhs.sup_norm_bound == rhs.sup_norm_bound && lhs.pilot_grid == rhs.pilot_grid &&
           lhs.isotropic == rhs.isotropic && lhs.seed == rhs.seed &&
           lhs.quad_points == rhs.quad_points;
}

std::vector<ExperimentConfig> parse_config(const std::string& text) {
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;
    std::vector<std::pair<std::string, std::string>> defaults;
    bool in_section = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(line_no) + ": unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty())
                throw config_error("line " + std::to_string(line_no) + ": empty section name");
            sections.emplace_back(name, std::vector<std::pair<std::string, std::string>>{});
            in_section = true;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("line " + std::to_string(line_no) + ": empty key");
        if (in_section)
            sections.back().second.emplace_back(key, value);
        else
            defaults.emplace_back(key, value);
    }

    if (sections.empty()) sections.emplace_back("default", std::vector<std::pair<std::string, std::string>>{});

    std::vector<ExperimentConfig> experiments;
    experiments.reserve(sections.size());
    for (const auto& [name, pairs] : sections) {
        ExperimentConfig cfg;
        cfg.name = name;
        for (const auto& [key, value] : defaults) apply_key(cfg, key, value);
        for (const auto& [key, value] : pairs) apply_key(cfg, key, value);
        validate(cfg);
        experiments.push_back(std::move(cfg));
    }
    return experiments;
}

std::vector<ExperimentConfig> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const std::vector<ExperimentConfig>& experiments) {
    std::ostringstream out;
    for (const ExperimentConfig& cfg : experiments) {
        out << "[" << cfg.name << "]\n";
        out << "process = " << cfg.process << "\n";
        out << "a = " << format_double(cfg.a) << "\n";
        out << "b = " << format_double(cfg.b) << "\n";
        out << "sigma = " << format_double(cfg.sigma) << "\n";
        out << "beta = " << format_double(cfg.beta) << "\n";
        out << "burn_in = " << cfg.burn_in << "\n";
        out << "domain = " << format_double(cfg.domain.x.lo) << " "
            << format_double(cfg.domain.x.hi) << " " << format_double(cfg.domain.y.lo) << " "
            << format_double(cfg.domain.y.hi) << "\n";
        out << "family_x = " << cfg.family_x.name() << "\n";
        out << "family_y = " << cfg.family_y.name() << "\n";
        out << "n =";
        for (int n : cfg.n_values) out << " " << n;
        out << "\n";
        out << "N = " << cfg.replicates << "\n";
        out << "penalty_mode = "
            << (cfg.penalty_mode == PenaltyMode::fixed
                    ? "fixed"
                    : cfg.penalty_mode == PenaltyMode::simulation ? "simulation" : "random")
            << "\n";
        out << "penalty_constant = " << format_double(cfg.penalty_constant) << "\n";
        out << "sup_norm_bound = " << format_double(cfg.sup_norm_bound) << "\n";
        out << "pilot_grid = " << cfg.pilot_grid << "\n";
        out << "isotropic = " << (cfg.isotropic ? "true" : "false") << "\n";
        out << "seed = " << cfg.seed << "\n";
        out << "quad_points = " << cfg.quad_points << "\n";
        out << "\n";
    }
    return out.str();
}

std::uint64_t config_hash(const std::vector<ExperimentConfig>& experiments) {
    const std::string text = serialize_config(experiments);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace tde
