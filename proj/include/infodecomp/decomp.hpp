#ifndef INFODECOMP_DECOMP_HPP
#define INFODECOMP_DECOMP_HPP

#include <string>
#include <vector>

#include <infodecomp/search.hpp>

// Per-feature decomposition of the predictive information into unique,
// redundant and synergistic components: significance gate, both greedy
// searches, final shared-space recomputation, and the closing arithmetic
// U = I(Y;X|Zmin), R = I(Y;X) - U, S = I(Y;X|Zmax) - I(Y;X).

namespace infodecomp {

DecompositionResult decompose(const EstimatorContext& ctx, int x, int threads = 1);

// One result per feature, driven by source-specific seed streams. When
// threads > 1 the sources run in parallel with serial inner loops.
std::vector<DecompositionResult> decompose_all(const ValidatedDataset& dataset, const EstimatorConfig& config,
                                               int threads = 1);

// True when the stored components satisfy their defining identities
// (bit-exact) and the sum identity U+R+S = cmi_zmax within 2 ulp.
bool result_identities_ok(const DecompositionResult& r);

struct Stat {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, 0 when n < 2
};

struct Aggregate {
    std::size_t n_repeats = 0;
    std::vector<std::string> feature_names;
    std::vector<Stat> mi, cmi_zmin, cmi_zmax, unique, redundant, synergistic;
    std::vector<double> mi_significant_pct;
    // percentage of repeats in which feature f entered the conditioning set
    // of source s: [source][feature]
    std::vector<std::vector<double>> zmin_freq_pct, zmax_freq_pct;
    // percentage of repeats in which feature f was the j-th accepted
    // selection for source s: [source][iteration][feature]
    std::vector<std::vector<std::vector<double>>> order_min_pct, order_max_pct;
};

Aggregate aggregate_runs(const std::vector<std::vector<DecompositionResult>>& runs,
                         std::vector<std::string> feature_names);

// Stratified bootstrap: n_repeats resamples with replacement preserving the
// per-class counts, jittered per config.jitter_scale, decomposed and
// aggregated. Repeats are independent seed-derived work units.
Aggregate bootstrap_decompose(const ValidatedDataset& dataset, const EstimatorConfig& config, int n_repeats,
                              int threads = 1);

// Single stratified resample (exposed for the bootstrap tests).
Dataset stratified_resample(const ValidatedDataset& dataset, std::uint64_t stream_seed);

}  // namespace infodecomp

#endif  // INFODECOMP_DECOMP_HPP
