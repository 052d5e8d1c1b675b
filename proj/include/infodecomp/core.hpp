#ifndef INFODECOMP_CORE_HPP
#define INFODECOMP_CORE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <infodecomp/errors.hpp>

namespace infodecomp {

// N samples of m continuous features plus one discrete class column.
// Features are stored column-major: features[c][i] is feature c of sample i.
struct Dataset {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;  // indices into class_alphabet
    std::vector<std::string> feature_names;
    std::vector<std::string> class_alphabet;

    std::size_t n_samples() const { return labels.size(); }
    std::size_t n_features() const { return features.size(); }
    std::size_t n_classes() const { return class_alphabet.size(); }
    std::vector<std::size_t> class_counts() const;
};

struct EstimatorConfig {
    int k = 10;
    int n_surrogates = 100;
    double alpha = 0.05;          // percentile tested is 1 - alpha
    std::uint64_t seed = 0;
    bool standardize = true;
    double jitter_scale = 0.0;    // relative to per-feature standard deviation
    long long mc_samples = 1000000;

    void check() const;  // throws Error on invariant violation
};

// Proof-of-validation wrapper: estimator operations take this type, so an
// unchecked Dataset cannot reach the neighbor-search code paths.
struct ValidatedDataset {
    Dataset data;
    std::vector<std::size_t> class_counts;
};

// Checks every Dataset invariant for the configured k and reports per-class
// counts. Throws NonFiniteValueError, ClassTooSmallError, EmptyAlphabetError
// or InvalidDatasetError.
ValidatedDataset validate(Dataset dataset, const EstimatorConfig& config);

struct StandardizeResult {
    Dataset data;
    std::vector<bool> zero_variance;  // flagged columns were centered only
};

// Per-column z-score: subtract the sample mean, divide by the population
// standard deviation. Zero-variance columns are centered and flagged.
StandardizeResult standardize(const Dataset& dataset);

// Adds independent uniform noise in [-j, j] per feature, j = jitter_scale
// times that feature's standard deviation. jitter_scale = 0 is the identity.
// The noise stream is derived from config.seed and the feature index.
Dataset jitter(const Dataset& dataset, const EstimatorConfig& config);

struct TraceIteration {
    // (feature index, CMI with that candidate added), ascending feature index
    std::vector<std::pair<int, double>> candidate_scores;
    std::optional<int> selected;
    double cmi_before = 0.0;
    double cmi_after = 0.0;
    double surrogate_threshold = 0.0;
    bool accepted = false;
};

struct SearchTrace {
    std::vector<TraceIteration> iterations;
};

struct DecompositionResult {
    int source_index = -1;
    double mi = 0.0;  // I(Y;X), nats, from the final shared-space recomputation
    bool mi_significant = false;
    double cmi_zmin = 0.0;
    double cmi_zmax = 0.0;
    double unique = 0.0;       // = cmi_zmin
    double redundant = 0.0;    // = mi - cmi_zmin
    double synergistic = 0.0;  // = cmi_zmax - mi
    std::vector<int> zmin;
    std::vector<int> zmax;
    SearchTrace trace_min;
    SearchTrace trace_max;
};

}  // namespace infodecomp

#endif  // INFODECOMP_CORE_HPP
