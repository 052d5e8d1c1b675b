#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <infodecomp/core.hpp>
#include <infodecomp/rng.hpp>

using namespace infodecomp;

namespace {

Dataset two_class_dataset(std::size_t per_class, std::uint64_t seed = 3) {
    Rng rng(seed);
    Dataset ds;
    ds.feature_names = {"a", "b"};
    ds.class_alphabet = {"y1", "y2"};
    ds.features.assign(2, {});
    for (std::size_t y = 0; y < 2; ++y) {
        for (std::size_t i = 0; i < per_class; ++i) {
            ds.features[0].push_back(rng.next_normal() + (y ? 1.0 : -1.0));
            ds.features[1].push_back(rng.next_normal());
            ds.labels.push_back(static_cast<int>(y));
        }
    }
    return ds;
}

EstimatorConfig config_k(int k) {
    EstimatorConfig cfg;
    cfg.k = k;
    return cfg;
}

}  // namespace

TEST_CASE("validate accepts a well-formed two-class dataset") {
    const auto v = validate(two_class_dataset(1000), config_k(10));
    CHECK(v.class_counts == std::vector<std::size_t>{1000, 1000});
}

TEST_CASE("validate rejects a class with too few samples for k") {
    Dataset ds = two_class_dataset(20);
    // shrink class y2 to 8 samples
    Dataset small;
    small.feature_names = ds.feature_names;
    small.class_alphabet = ds.class_alphabet;
    small.features.assign(2, {});
    std::size_t kept_y2 = 0;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        if (ds.labels[i] == 1 && kept_y2 >= 8) continue;
        if (ds.labels[i] == 1) ++kept_y2;
        small.labels.push_back(ds.labels[i]);
        small.features[0].push_back(ds.features[0][i]);
        small.features[1].push_back(ds.features[1][i]);
    }
    CHECK_THROWS_AS(validate(std::move(small), config_k(10)), ClassTooSmallError);
}

TEST_CASE("validate reports non-finite cells with their position") {
    Dataset ds = two_class_dataset(50);
    ds.features[1][7] = std::numeric_limits<double>::quiet_NaN();
    try {
        validate(std::move(ds), config_k(5));
        FAIL("expected NonFiniteValueError");
    } catch (const NonFiniteValueError& e) {
        CHECK(e.row == 7);
        CHECK(e.col == 1);
    }
}

TEST_CASE("validate rejects an empty alphabet and an unused class symbol") {
    Dataset ds = two_class_dataset(50);
    ds.class_alphabet.clear();
    CHECK_THROWS_AS(validate(Dataset(ds), config_k(5)), EmptyAlphabetError);

    Dataset ds2 = two_class_dataset(50);
    ds2.class_alphabet.push_back("ghost");
    CHECK_THROWS_AS(validate(std::move(ds2), config_k(5)), ClassTooSmallError);
}

TEST_CASE("config invariants") {
    EstimatorConfig cfg;
    cfg.n_surrogates = 18;
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg = EstimatorConfig{};
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg = EstimatorConfig{};
    cfg.jitter_scale = 1e-6;
    CHECK_THROWS_AS(cfg.check(), Error);
    CHECK_NOTHROW(EstimatorConfig{}.check());
}

TEST_CASE("standardize matches the arithmetic-sequence z-scores") {
    Dataset ds;
    ds.feature_names = {"a"};
    ds.class_alphabet = {"y"};
    ds.features = {{1.0, 2.0, 3.0}};
    ds.labels = {0, 0, 0};
    const auto out = standardize(ds);
    CHECK(out.data.features[0][0] == doctest::Approx(-1.224744871).epsilon(1e-9));
    CHECK(out.data.features[0][1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.data.features[0][2] == doctest::Approx(1.224744871).epsilon(1e-9));
    CHECK_FALSE(out.zero_variance[0]);
}

TEST_CASE("standardize is idempotent within 1e-10 and flags constants") {
    Dataset ds = two_class_dataset(200);
    const auto once = standardize(ds);
    const auto twice = standardize(once.data);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < ds.n_samples(); ++i)
            CHECK(std::fabs(once.data.features[c][i] - twice.data.features[c][i]) < 1e-10);

    Dataset constant;
    constant.feature_names = {"c"};
    constant.class_alphabet = {"y"};
    constant.features = {{5.0, 5.0, 5.0}};
    constant.labels = {0, 0, 0};
    const auto flagged = standardize(constant);
    CHECK(flagged.zero_variance[0]);
    CHECK(flagged.data.features[0] == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("jitter: zero scale is the identity, same seed reproduces, duplicates separate") {
    Dataset ds = two_class_dataset(100);

    EstimatorConfig cfg;
    cfg.jitter_scale = 0.0;
    const Dataset same = jitter(ds, cfg);
    CHECK(same.features == ds.features);

    // duplicated rows
    Dataset dup = ds;
    for (std::size_t c = 0; c < 2; ++c) dup.features[c][1] = dup.features[c][0];
    dup.labels[1] = dup.labels[0];

    cfg.jitter_scale = 1e-10;
    cfg.seed = 42;
    const Dataset j1 = jitter(dup, cfg);
    const Dataset j2 = jitter(dup, cfg);
    CHECK(j1.features == j2.features);  // determinism

    bool separated = false;
    for (std::size_t c = 0; c < 2 && !separated; ++c) separated = j1.features[c][0] != j1.features[c][1];
    CHECK(separated);
}

TEST_CASE("rng streams: named derivation is stable and shuffles are reproducible") {
    const auto s1 = derive_stream(1, {2, 3});
    const auto s2 = derive_stream(1, {2, 3});
    const auto s3 = derive_stream(1, {3, 2});
    CHECK(s1 == s2);
    CHECK(s1 != s3);

    Rng a(s1), b(s1);
    std::vector<int> va{1, 2, 3, 4, 5, 6, 7}, vb = va;
    a.shuffle(va);
    b.shuffle(vb);
    CHECK(va == vb);
}
