#ifndef INFODECOMP_PIPELINE_HPP
#define INFODECOMP_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <infodecomp/decomp.hpp>
#include <infodecomp/scenarios.hpp>

// Batch drivers shared by the CLI and the acceptance suite. Every repeat is
// an independent work unit with seeds derived from (seed, repeat), so the
// outputs do not depend on the worker-pool size.

namespace infodecomp {

struct BatchSpec {
    std::string scenario;
    std::size_t n_per_class = 1000;
    std::size_t n_total_override = 0;  // nongauss only
    int repeats = 100;
    EstimatorConfig config;
    int threads = 1;
};

struct BatchOutput {
    std::vector<std::string> feature_names;
    Aggregate aggregate;
    std::vector<std::vector<DecompositionResult>> runs;  // [repeat][feature]
};

// Fresh simulated dataset per repeat.
BatchOutput run_batch(const BatchSpec& spec);

// Full per-feature decomposition of one dataset (jitter applied when
// configured, then validation, then decompose_all).
std::vector<DecompositionResult> run_analysis(Dataset dataset, const EstimatorConfig& config, int threads = 1);

}  // namespace infodecomp

#endif  // INFODECOMP_PIPELINE_HPP
