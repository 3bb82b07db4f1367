#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tde/interval.hpp"

namespace tde {

enum class ProcessKind { ar1, radial_ou, arch };

/// Parameters of one of the three stationary Markov chains. Factories
/// validate stationarity constraints and throw domain_error on violation.
class ChainSpec {
public:
    /// X_{i+1} = a X_i + b + sigma eps_{i+1}, |a| < 1, sigma > 0.
    static ChainSpec ar1(double a, double b, double sigma);

    /// Euclidean norm of three independent AR(1) components
    /// xi_{i+1} = a xi_i + beta eps_{i+1}, |a| < 1, beta > 0.
    static ChainSpec radial_ou(double a, double beta);

    /// X_{i+1} = sin(X_i) + (cos(X_i) + 3) eps_{i+1}; started at 0 and run
    /// for burn_in steps before the first emitted value.
    static ChainSpec arch(int burn_in = 1000);

    ProcessKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double sigma() const { return sigma_; }
    double beta() const { return beta_; }
    int burn_in() const { return burn_in_; }

    std::string name() const;

    friend bool operator==(const ChainSpec&, const ChainSpec&) = default;

private:
    ChainSpec() = default;

    ProcessKind kind_ = ProcessKind::ar1;
    double a_ = 0.5;
    double b_ = 3.0;
    double sigma_ = 1.0;
    double beta_ = 3.0;
    int burn_in_ = 1000;
};

/// A simulated trajectory X_1, ..., X_{n+1} together with the seed that
/// produced it. Regenerating with the same spec, n and seed is bit identical.
struct Path {
    std::vector<double> values;
    std::uint64_t seed = 0;

    /// Number of transition pairs (X_i, X_{i+1}).
    int n() const { return static_cast<int>(values.size()) - 1; }
};

/// Draws X_1 from the stationary law (AR(1), radial) or from the burned-in
/// chain (ARCH), then advances n steps. Normal deviates come from a
/// Box-Muller transform over explicit 53-bit uniforms of a mt19937_64
/// stream, so paths are reproducible across platforms.
Path simulate(const ChainSpec& spec, int n, std::uint64_t seed);

/// Transition density pi(x, y) of the chain.
double transition_density(const ChainSpec& spec, double x, double y);

/// Stationary marginal density f(x); throws unsupported_error when no closed
/// form exists (ARCH).
double stationary_density(const ChainSpec& spec, double x);
bool has_stationary_density(const ChainSpec& spec);

/// Modified Bessel function of the first kind of order 1/2,
/// I_{1/2}(z) = sqrt(2 / (pi z)) sinh(z), for z > 0.
double bessel_i_half(double z);

/// Estimation window used by the experiments when none is configured.
Rectangle default_domain(const ChainSpec& spec);

/// Seed of replicate k derived from a master seed:
/// master xor (k * 0x9E3779B97F4A7C15).
std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t k);

}  // namespace tde
