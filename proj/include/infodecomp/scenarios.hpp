#ifndef INFODECOMP_SCENARIOS_HPP
#define INFODECOMP_SCENARIOS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <infodecomp/core.hpp>
#include <infodecomp/oracle.hpp>

// Deterministic generators for the synthetic benchmarks. The Gaussian
// scenarios return the generating mixture alongside the samples so the oracle
// can score them; the Heaviside scenario has no closed-form mixture.

namespace infodecomp::scenarios {

struct Generated {
    Dataset data;
    std::optional<oracle::GmmSpec> spec;
};

// mixture specifications alone (no sampling)
oracle::GmmSpec spec_unique();
oracle::GmmSpec spec_synergy();
oracle::GmmSpec spec_redundancy();
oracle::GmmSpec spec_mixed6();

Generated gen_unique(std::size_t n_per_class, std::uint64_t seed);
Generated gen_synergy(std::size_t n_per_class, std::uint64_t seed);
Generated gen_redundancy(std::size_t n_per_class, std::uint64_t seed);
Generated gen_mixed6(std::size_t n_per_class, std::uint64_t seed);

// X1..X4 ~ U(-1,1); Y counts the positive ones of {X1*X2, X3, X4}; X5 is X4
// plus unit Gaussian noise; X6 ~ U(-1,1) independent. Theta(0) is 0.
Dataset gen_nongauss(std::size_t n_total, std::uint64_t seed);

bool is_known_scenario(const std::string& name);
bool is_gaussian_scenario(const std::string& name);

// CLI entry point: unique | synergy | redundancy | mixed6 | nongauss.
// For nongauss the total sample count is 4 * n_per_class (four class
// symbols) unless n_total_override is nonzero.
Generated generate(const std::string& name, std::size_t n_per_class, std::uint64_t seed,
                   std::size_t n_total_override = 0);

}  // namespace infodecomp::scenarios

#endif  // INFODECOMP_SCENARIOS_HPP
