#include <infodecomp/core.hpp>

#include <cmath>
#include <limits>

#include <infodecomp/rng.hpp>

namespace infodecomp {

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_alphabet.size(), 0);
    for (int y : labels) {
        if (y >= 0 && static_cast<std::size_t>(y) < counts.size()) ++counts[y];
    }
    return counts;
}

void EstimatorConfig::check() const {
    if (k < 1) throw Error("k must be at least 1");
    if (n_surrogates < 19) throw Error("n_surrogates must be at least 19 for a usable 95th-percentile test");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
    if (!(jitter_scale >= 0.0)) throw Error("jitter_scale must be nonnegative");
    if (jitter_scale >= 1e-6) throw Error("jitter_scale must stay below 1e-6 to leave estimates unaffected");
    if (mc_samples < 1) throw Error("mc_samples must be positive");
}

ValidatedDataset validate(Dataset dataset, const EstimatorConfig& config) {
    config.check();
    const std::size_t n = dataset.labels.size();
    const std::size_t m = dataset.features.size();

    if (m < 1) throw InvalidDatasetError("dataset needs at least one feature");
    if (n < 2) throw InvalidDatasetError("dataset needs at least two samples");
    if (dataset.class_alphabet.empty()) throw EmptyAlphabetError();
    if (dataset.feature_names.size() != m)
        throw InvalidDatasetError("feature_names size does not match the number of feature columns");
    for (std::size_t c = 0; c < m; ++c) {
        if (dataset.features[c].size() != n)
            throw InvalidDatasetError("feature column " + std::to_string(c) + " has wrong length");
    }

    for (std::size_t c = 0; c < m; ++c) {
        const auto& col = dataset.features[c];
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(col[i])) throw NonFiniteValueError(i, c);
        }
    }

    std::vector<std::size_t> counts(dataset.class_alphabet.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const int y = dataset.labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= counts.size())
            throw InvalidDatasetError("label at row " + std::to_string(i) + " is outside the class alphabet");
        ++counts[y];
    }
    for (std::size_t y = 0; y < counts.size(); ++y) {
        // an unused alphabet member is a class of size 0, caught by the same rule
        if (counts[y] <= static_cast<std::size_t>(config.k))
            throw ClassTooSmallError(dataset.class_alphabet[y], counts[y], config.k);
    }

    return ValidatedDataset{std::move(dataset), std::move(counts)};
}

StandardizeResult standardize(const Dataset& dataset) {
    StandardizeResult out;
    out.data = dataset;
    out.zero_variance.assign(dataset.n_features(), false);

    const std::size_t n = dataset.n_samples();
    for (std::size_t c = 0; c < dataset.n_features(); ++c) {
        auto& col = out.data.features[c];
        double mean = 0.0;
        for (double v : col) mean += v;
        mean /= static_cast<double>(n);

        double var = 0.0;
        for (double v : col) {
            const double d = v - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);

        if (var > 0.0) {
            const double inv_sd = 1.0 / std::sqrt(var);
            for (double& v : col) v = (v - mean) * inv_sd;
        } else {
            for (double& v : col) v = 0.0;
            out.zero_variance[c] = true;
        }
    }
    return out;
}

Dataset jitter(const Dataset& dataset, const EstimatorConfig& config) {
    Dataset out = dataset;
    if (config.jitter_scale == 0.0) return out;

    const std::size_t n = dataset.n_samples();
    for (std::size_t c = 0; c < dataset.n_features(); ++c) {
        const auto& col = dataset.features[c];
        double mean = 0.0;
        for (double v : col) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : col) {
            const double d = v - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        const double sd = std::sqrt(var);
        if (sd == 0.0) continue;  // the amplitude is relative to the spread, so a constant column stays put

        const double j = config.jitter_scale * sd;
        Rng rng(derive_stream(config.seed, {static_cast<std::uint64_t>(StreamPurpose::jitter), c}));
        auto& dst = out.features[c];
        for (std::size_t i = 0; i < n; ++i) dst[i] += rng.next_uniform(-j, j);
    }
    return out;
}

}  // namespace infodecomp
