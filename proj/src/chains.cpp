#include "tde/chains.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "tde/errors.hpp"

namespace tde {
namespace {

// Box-Muller with a pinned uniform mapping; both deviates of a pair are
// consumed before the engine advances again.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = ((eng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = (eng_() >> 11) * 0x1.0p-53;        // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

double gaussian_pdf(double u, double sd) {
    const double z = u / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double arch_scale(double x) { return std::cos(x) + 3.0; }

}  // namespace

ChainSpec ChainSpec::ar1(double a, double b, double sigma) {
    if (!(std::abs(a) < 1.0)) throw domain_error("ar1: |a| must be < 1");
    if (!(sigma > 0.0)) throw domain_error("ar1: sigma must be > 0");
    ChainSpec spec;
    spec.kind_ = ProcessKind::ar1;
    spec.a_ = a;
    spec.b_ = b;
    spec.sigma_ = sigma;
    return spec;
}

ChainSpec ChainSpec::radial_ou(double a, double beta) {
    if (!(std::abs(a) < 1.0)) throw domain_error("radial_ou: |a| must be < 1");
    if (!(beta > 0.0)) throw domain_error("radial_ou: beta must be > 0");
    ChainSpec spec;
    spec.kind_ = ProcessKind::radial_ou;
    spec.a_ = a;
    spec.beta_ = beta;
    return spec;
}

ChainSpec ChainSpec::arch(int burn_in) {
    if (burn_in < 0) throw domain_error("arch: burn_in must be >= 0");
    ChainSpec spec;
    spec.kind_ = ProcessKind::arch;
    spec.burn_in_ = burn_in;
    return spec;
}

std::string ChainSpec::name() const {
    switch (kind_) {
        case ProcessKind::ar1:
            return "ar1";
        case ProcessKind::radial_ou:
            return "radial_ou";
        case ProcessKind::arch:
            return "arch";
    }
    return "";
}

Path simulate(const ChainSpec& spec, int n, std::uint64_t seed) {
    if (n < 1) throw input_error("simulate requires n >= 1");
    NormalSampler normal(seed);
    std::vector<double> values;
    values.reserve(n + 1);
    switch (spec.kind()) {
        case ProcessKind::ar1: {
            const double mean = spec.b() / (1.0 - spec.a());
            const double sd = spec.sigma() / std::sqrt(1.0 - spec.a() * spec.a());
            double x = mean + sd * normal.next();
            values.push_back(x);
            for (int i = 0; i < n; ++i) {
                x = spec.a() * x + spec.b() + spec.sigma() * normal.next();
                values.push_back(x);
            }
            break;
        }
        case ProcessKind::radial_ou: {
            const double rho = spec.beta() / std::sqrt(1.0 - spec.a() * spec.a());
            double comp[3];
            for (double& c : comp) c = rho * normal.next();
            values.push_back(std::sqrt(comp[0] * comp[0] + comp[1] * comp[1] + comp[2] * comp[2]));
            for (int i = 0; i < n; ++i) {
                for (double& c : comp) c = spec.a() * c + spec.beta() * normal.next();
                values.push_back(
                    std::sqrt(comp[0] * comp[0] + comp[1] * comp[1] + comp[2] * comp[2]));
            }
            break;
        }
        case ProcessKind::arch: {
            double x = 0.0;
            for (int i = 0; i < spec.burn_in(); ++i)
                x = std::sin(x) + arch_scale(x) * normal.next();
            values.push_back(x);
            for (int i = 0; i < n; ++i) {
                x = std::sin(x) + arch_scale(x) * normal.next();
                values.push_back(x);
            }
            break;
        }
    }
    return Path{std::move(values), seed};
}

double transition_density(const ChainSpec& spec, double x, double y) {
    switch (spec.kind()) {
        case ProcessKind::ar1:
            return gaussian_pdf(y - spec.a() * x - spec.b(), spec.sigma());
        case ProcessKind::radial_ou: {
            if (!(x > 0.0)) throw domain_error("radial_ou transition density requires x > 0");
            if (y <= 0.0) return 0.0;
            const double a = spec.a();
            const double b2 = spec.beta() * spec.beta();
            const double z = a * x * y / b2;
            if (z < 700.0) {
                return std::exp(-(y * y + a * a * x * x) / (2.0 * b2)) * bessel_i_half(z) *
                       (y / b2) * std::sqrt(y / (a * x));
            }
            // sinh overflows past ~710; expand sinh into the two Gaussian bumps
            const double norm = y / (a * x * spec.beta() * std::sqrt(2.0 * std::numbers::pi));
            const double d1 = y - a * x;
            const double d2 = y + a * x;
            return norm *
                   (std::exp(-d1 * d1 / (2.0 * b2)) - std::exp(-d2 * d2 / (2.0 * b2)));
        }
        case ProcessKind::arch:
            return gaussian_pdf(y - std::sin(x), arch_scale(x));
    }
    return 0.0;
}

double stationary_density(const ChainSpec& spec, double x) {
    switch (spec.kind()) {
        case ProcessKind::ar1: {
            const double mean = spec.b() / (1.0 - spec.a());
            const double sd = spec.sigma() / std::sqrt(1.0 - spec.a() * spec.a());
            return gaussian_pdf(x - mean, sd);
        }
        case ProcessKind::radial_ou: {
            if (x <= 0.0) return 0.0;
            const double rho2 = spec.beta() * spec.beta() / (1.0 - spec.a() * spec.a());
            const double rho = std::sqrt(rho2);
            return std::exp(-x * x / (2.0 * rho2)) * 2.0 * x * x /
                   (rho2 * rho * std::sqrt(2.0 * std::numbers::pi));
        }
        case ProcessKind::arch:
            throw unsupported_error("arch has no closed-form stationary density");
    }
    return 0.0;
}

bool has_stationary_density(const ChainSpec& spec) { return spec.kind() != ProcessKind::arch; }

double bessel_i_half(double z) {
    if (!(z > 0.0)) throw domain_error("bessel_i_half requires z > 0");
    return std::sqrt(2.0 / (std::numbers::pi * z)) * std::sinh(z);
}

Rectangle default_domain(const ChainSpec& spec) {
    switch (spec.kind()) {
        case ProcessKind::ar1:
            return {{4.0, 8.0}, {4.0, 8.0}};
        case ProcessKind::radial_ou:
            return {{2.0, 10.0}, {2.0, 10.0}};
        case ProcessKind::arch:
            return {{-6.0, 6.0}, {-6.0, 6.0}};
    }
    return {};
}

std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t k) {
    return master ^ (k * 0x9E3779B97F4A7C15ULL);
}

}  // namespace tde
