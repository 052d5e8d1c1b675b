#include <infodecomp/scenarios.hpp>

#include <infodecomp/rng.hpp>

namespace infodecomp::scenarios {

namespace {

oracle::GmmSpec two_class_spec(std::vector<double> mean1, std::vector<double> mean2,
                               std::vector<std::vector<double>> cov1, std::vector<std::vector<double>> cov2,
                               std::vector<std::string> names) {
    oracle::GmmSpec spec;
    spec.feature_names = std::move(names);
    spec.classes.resize(2);
    spec.classes[0].prior = 0.5;
    spec.classes[0].mean = std::move(mean1);
    spec.classes[0].cov = std::move(cov1);
    spec.classes[1].prior = 0.5;
    spec.classes[1].mean = std::move(mean2);
    spec.classes[1].cov = std::move(cov2);
    return spec;
}

Generated sample_two_class(oracle::GmmSpec spec, std::size_t n_per_class, std::uint64_t seed) {
    Generated out;
    out.data.feature_names = spec.feature_names;
    out.data.class_alphabet = {"y1", "y2"};
    const std::size_t d = spec.dim();
    out.data.features.assign(d, {});
    for (auto& col : out.data.features) col.reserve(2 * n_per_class);

    for (std::size_t y = 0; y < 2; ++y) {
        const auto cols = oracle::sample_class(
            spec, y, n_per_class,
            derive_stream(seed, {static_cast<std::uint64_t>(StreamPurpose::scenario), y}));
        for (std::size_t c = 0; c < d; ++c)
            out.data.features[c].insert(out.data.features[c].end(), cols[c].begin(), cols[c].end());
        out.data.labels.insert(out.data.labels.end(), n_per_class, static_cast<int>(y));
    }
    out.spec = std::move(spec);
    return out;
}

}  // namespace

oracle::GmmSpec spec_unique() {
    return two_class_spec({1.0, 1.0}, {-1.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}}, {{1.0, 0.0}, {0.0, 1.0}},
                          {"X1", "X2"});
}

oracle::GmmSpec spec_synergy() {
    return two_class_spec({0.0, 0.0}, {0.0, 0.0}, {{1.0, 0.5}, {0.5, 1.0}}, {{1.0, -0.5}, {-0.5, 1.0}},
                          {"X1", "X2"});
}

oracle::GmmSpec spec_redundancy() {
    return two_class_spec({1.0, 1.0}, {-1.0, -1.0}, {{1.0, 0.99}, {0.99, 1.0}}, {{1.0, 0.99}, {0.99, 1.0}},
                          {"X1", "X2"});
}

oracle::GmmSpec spec_mixed6() {
    std::vector<std::vector<double>> cov1{
        {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.25, 0.0, 0.0, 0.0}, {0.0, 0.25, 1.0, 0.0, 0.0, 0.0},
        {0.0, 0.0, 0.0, 1.0, 0.5, 0.0}, {0.0, 0.0, 0.0, 0.5, 1.0, 0.0},  {0.0, 0.0, 0.0, 0.0, 0.0, 1.0}};
    std::vector<std::vector<double>> cov2{
        {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.25, 0.0, 0.0, 0.0},  {0.0, 0.25, 1.0, 0.0, 0.0, 0.0},
        {0.0, 0.0, 0.0, 1.0, -0.5, 0.0}, {0.0, 0.0, 0.0, -0.5, 1.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0, 1.0}};
    return two_class_spec({1.0, 0.5, 0.5, 0.0, 1.0, 0.0}, {-1.0, -0.5, -0.5, 0.0, -1.0, 0.0}, std::move(cov1),
                          std::move(cov2), {"X1", "X2", "X3", "X4", "X5", "X6"});
}

Generated gen_unique(std::size_t n_per_class, std::uint64_t seed) {
    return sample_two_class(spec_unique(), n_per_class, seed);
}

Generated gen_synergy(std::size_t n_per_class, std::uint64_t seed) {
    return sample_two_class(spec_synergy(), n_per_class, seed);
}

Generated gen_redundancy(std::size_t n_per_class, std::uint64_t seed) {
    return sample_two_class(spec_redundancy(), n_per_class, seed);
}

Generated gen_mixed6(std::size_t n_per_class, std::uint64_t seed) {
    return sample_two_class(spec_mixed6(), n_per_class, seed);
}

Dataset gen_nongauss(std::size_t n_total, std::uint64_t seed) {
    Dataset out;
    out.feature_names = {"X1", "X2", "X3", "X4", "X5", "X6"};
    out.class_alphabet = {"0", "1", "2", "3"};
    out.features.assign(6, std::vector<double>(n_total));
    out.labels.resize(n_total);

    Rng rng(derive_stream(seed, {static_cast<std::uint64_t>(StreamPurpose::scenario), 0}));
    const auto theta = [](double u) { return u > 0.0 ? 1 : 0; };
    for (std::size_t i = 0; i < n_total; ++i) {
        const double x1 = rng.next_uniform(-1.0, 1.0);
        const double x2 = rng.next_uniform(-1.0, 1.0);
        const double x3 = rng.next_uniform(-1.0, 1.0);
        const double x4 = rng.next_uniform(-1.0, 1.0);
        const double x5 = x4 + rng.next_normal();
        const double x6 = rng.next_uniform(-1.0, 1.0);
        out.features[0][i] = x1;
        out.features[1][i] = x2;
        out.features[2][i] = x3;
        out.features[3][i] = x4;
        out.features[4][i] = x5;
        out.features[5][i] = x6;
        out.labels[i] = theta(x1 * x2) + theta(x3) + theta(x4);
    }
    return out;
}

bool is_known_scenario(const std::string& name) {
    return name == "unique" || name == "synergy" || name == "redundancy" || name == "mixed6" || name == "nongauss";
}

bool is_gaussian_scenario(const std::string& name) { return is_known_scenario(name) && name != "nongauss"; }

Generated generate(const std::string& name, std::size_t n_per_class, std::uint64_t seed,
                   std::size_t n_total_override) {
    if (name == "unique") return gen_unique(n_per_class, seed);
    if (name == "synergy") return gen_synergy(n_per_class, seed);
    if (name == "redundancy") return gen_redundancy(n_per_class, seed);
    if (name == "mixed6") return gen_mixed6(n_per_class, seed);
    if (name == "nongauss") {
        const std::size_t n = n_total_override ? n_total_override : 4 * n_per_class;
        return Generated{gen_nongauss(n, seed), std::nullopt};
    }
    throw Error("unknown scenario: " + name + " (expected unique|synergy|redundancy|mixed6|nongauss)");
}

}  // namespace infodecomp::scenarios
