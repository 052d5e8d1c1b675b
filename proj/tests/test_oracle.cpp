#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <infodecomp/oracle.hpp>
#include <infodecomp/rng.hpp>
#include <infodecomp/scenarios.hpp>

#include "oracles.hpp"

using namespace infodecomp;
using oracle::GmmSpec;

namespace {

GmmSpec identical_two_class_spec() {
    GmmSpec spec;
    spec.feature_names = {"X1", "X2"};
    spec.classes.resize(2);
    for (auto& c : spec.classes) {
        c.prior = 0.5;
        c.mean = {0.3, -0.2};
        c.cov = {{1.0, 0.4}, {0.4, 2.0}};
    }
    return spec;
}

// explicit-inverse quadratic form, independent of the Cholesky path
double logpdf_by_inverse(const std::vector<double>& x, const std::vector<double>& mean,
                         std::vector<std::vector<double>> cov) {
    const std::size_t d = cov.size();
    // Gauss-Jordan inverse and determinant
    std::vector<std::vector<double>> inv(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) inv[i][i] = 1.0;
    double det = 1.0;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::fabs(cov[r][col]) > std::fabs(cov[pivot][col])) pivot = r;
        std::swap(cov[col], cov[pivot]);
        std::swap(inv[col], inv[pivot]);
        if (pivot != col) det = -det;
        det *= cov[col][col];
        const double p = cov[col][col];
        for (std::size_t c = 0; c < d; ++c) {
            cov[col][c] /= p;
            inv[col][c] /= p;
        }
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            const double f = cov[r][col];
            for (std::size_t c = 0; c < d; ++c) {
                cov[r][c] -= f * cov[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    double quad = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) quad += (x[i] - mean[i]) * inv[i][j] * (x[j] - mean[j]);
    return -0.5 * (static_cast<double>(d) * std::log(2.0 * M_PI) + std::log(det) + quad);
}

}  // namespace

TEST_CASE("gaussian_logpdf: frozen scalar values") {
    CHECK(oracle::gaussian_logpdf(std::vector<double>{0.0}, std::vector<double>{0.0}, {{1.0}}) ==
          doctest::Approx(-0.918938533).epsilon(1e-9));
    CHECK(oracle::gaussian_logpdf(std::vector<double>{0.5, -0.5}, std::vector<double>{0.5, -0.5},
                                  {{1.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(-1.837877066).epsilon(1e-9));
}

TEST_CASE("gaussian_logpdf matches the explicit-inverse evaluation on random SPD matrices") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 1 + rng.next_below(5);
        std::vector<std::vector<double>> b(d, std::vector<double>(d));
        for (auto& row : b)
            for (auto& v : row) v = rng.next_normal();
        std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t t = 0; t < d; ++t) cov[i][j] += b[i][t] * b[j][t];
                if (i == j) cov[i][j] += 0.5;
            }
        std::vector<double> mean(d), x(d);
        for (auto& v : mean) v = rng.next_normal();
        for (auto& v : x) v = rng.next_normal();
        CHECK(oracle::gaussian_logpdf(x, mean, cov) ==
              doctest::Approx(logpdf_by_inverse(x, mean, cov)).epsilon(1e-9));
    }
}

TEST_CASE("gaussian_logpdf rejects non-positive-definite covariances") {
    CHECK_THROWS_AS(oracle::gaussian_logpdf(std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, 0.0},
                                            {{1.0, 2.0}, {2.0, 1.0}}),
                    NotPositiveDefiniteError);
}

TEST_CASE("gmm_logpdf: degenerate mixtures") {
    GmmSpec one;
    one.feature_names = {"a", "b"};
    one.classes.resize(1);
    one.classes[0].prior = 1.0;
    one.classes[0].mean = {0.1, 0.2};
    one.classes[0].cov = {{1.5, 0.2}, {0.2, 0.8}};
    const std::vector<double> pt{0.4, -0.3};
    const std::vector<int> both{0, 1};
    CHECK(oracle::gmm_logpdf(one, pt, both) ==
          doctest::Approx(oracle::gaussian_logpdf(pt, one.classes[0].mean, one.classes[0].cov)).epsilon(1e-14));

    const GmmSpec twin = identical_two_class_spec();
    CHECK(oracle::gmm_logpdf(twin, pt, both) ==
          doctest::Approx(oracle::gaussian_logpdf(pt, twin.classes[0].mean, twin.classes[0].cov)).epsilon(1e-12));
}

TEST_CASE("gmm_logpdf integrates to 1 over a wide 1-D grid") {
    const GmmSpec spec = scenarios::spec_unique();
    const std::vector<int> x1{0};
    const auto density = [&](double x) { return std::exp(oracle::gmm_logpdf(spec, std::vector<double>{x}, x1)); };
    const double integral = test_oracles::simpson(density, -12.0, 12.0, 3000);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("gmm_logpdf marginalization coherence") {
    const GmmSpec spec = scenarios::spec_mixed6();
    const std::vector<int> subset{1, 3, 4};
    GmmSpec reduced;
    reduced.feature_names = {"X2", "X4", "X5"};
    for (const auto& c : spec.classes) {
        oracle::GmmClass rc;
        rc.prior = c.prior;
        for (int i : subset) rc.mean.push_back(c.mean[i]);
        for (int i : subset) {
            rc.cov.emplace_back();
            for (int j : subset) rc.cov.back().push_back(c.cov[i][j]);
        }
        reduced.classes.push_back(std::move(rc));
    }
    const std::vector<double> pt{0.7, -0.4, 1.1};
    const std::vector<int> all_reduced{0, 1, 2};
    CHECK(oracle::gmm_logpdf(spec, pt, subset) == oracle::gmm_logpdf(reduced, pt, all_reduced));
}

TEST_CASE("sample_class: moments and determinism") {
    GmmSpec std2;
    std2.feature_names = {"a", "b"};
    std2.classes.resize(1);
    std2.classes[0].prior = 1.0;
    std2.classes[0].mean = {0.0, 0.0};
    std2.classes[0].cov = {{1.0, 0.0}, {0.0, 1.0}};
    const auto cols = oracle::sample_class(std2, 0, 100000, 9);
    for (const auto& col : cols) CHECK(std::fabs(test_oracles::mean_of(col)) < 0.02);

    const auto again = oracle::sample_class(std2, 0, 100000, 9);
    CHECK(cols == again);

    // synergy class y1 has covariance [[1, .5], [.5, 1]]
    const GmmSpec spec = scenarios::spec_synergy();
    const auto sy = oracle::sample_class(spec, 0, 100000, 4);
    double cxx = 0, cyy = 0, cxy = 0;
    const double mx = test_oracles::mean_of(sy[0]), my = test_oracles::mean_of(sy[1]);
    for (std::size_t i = 0; i < sy[0].size(); ++i) {
        cxx += (sy[0][i] - mx) * (sy[0][i] - mx);
        cyy += (sy[1][i] - my) * (sy[1][i] - my);
        cxy += (sy[0][i] - mx) * (sy[1][i] - my);
    }
    const double n = static_cast<double>(sy[0].size());
    CHECK(cxx / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(cyy / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(cxy / n == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("mc_cmi: identical classes carry no information") {
    const GmmSpec spec = identical_two_class_spec();
    CHECK(std::fabs(oracle::mc_cmi(spec, 0, {1}, 1000000, 1)) <= 3e-3);
    CHECK(std::fabs(oracle::mc_cmi(spec, 0, {}, 1000000, 1)) <= 3e-3);
}

TEST_CASE("mc_cmi on the unique scenario matches quadrature and ignores X2") {
    const GmmSpec spec = scenarios::spec_unique();
    const double quad = test_oracles::quadrature_mi_two_gaussians(1.0, -1.0);
    const double mi_x1 = oracle::mc_cmi(spec, 0, {}, 1000000, 2);
    const double cmi_x1_given_x2 = oracle::mc_cmi(spec, 0, {1}, 1000000, 2);
    CHECK(mi_x1 == doctest::Approx(quad).epsilon(0.01));
    CHECK(std::fabs(cmi_x1_given_x2 - mi_x1) <= 3e-3);
}

TEST_CASE("mc_cmi: synergy scenario is exchangeable in X1 and X2") {
    const GmmSpec spec = scenarios::spec_synergy();
    const double a = oracle::mc_cmi(spec, 0, {1}, 1000000, 3);
    const double b = oracle::mc_cmi(spec, 1, {0}, 1000000, 3);
    CHECK(std::fabs(a - b) <= 3e-3);
    CHECK(a > 0.1);  // the class flips the sign of the correlation
}

TEST_CASE("mc_cmi stays above -3e-3 on random valid specs") {
    Rng rng(17);
    for (int trial = 0; trial < 3; ++trial) {
        GmmSpec spec;
        spec.feature_names = {"a", "b", "c"};
        spec.classes.resize(2);
        double prior = 0.3 + 0.4 * rng.next_double();
        spec.classes[0].prior = prior;
        spec.classes[1].prior = 1.0 - prior;
        for (auto& c : spec.classes) {
            c.mean = {rng.next_normal(), rng.next_normal(), rng.next_normal()};
            std::vector<std::vector<double>> b(3, std::vector<double>(3));
            for (auto& row : b)
                for (auto& v : row) v = 0.6 * rng.next_normal();
            c.cov.assign(3, std::vector<double>(3, 0.0));
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    for (std::size_t t = 0; t < 3; ++t) c.cov[i][j] += b[i][t] * b[j][t];
                    if (i == j) c.cov[i][j] += 0.7;
                }
        }
        CHECK(oracle::mc_cmi(spec, 0, {1, 2}, 1000000, 100 + trial) >= -3e-3);
    }
}

TEST_CASE("mc standard error shrinks like sqrt(10) when n_mc grows 10x") {
    const GmmSpec spec = scenarios::spec_synergy();
    std::vector<double> small, large;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        small.push_back(oracle::mc_cmi(spec, 0, {1}, 10000, 1000 + seed));
        large.push_back(oracle::mc_cmi(spec, 0, {1}, 100000, 2000 + seed));
    }
    const double ratio = test_oracles::sd_of(small) / test_oracles::sd_of(large);
    CHECK(ratio > 1.8);
    CHECK(ratio < 5.5);
}

TEST_CASE("chain identity at truth: direct CMI equals the MI difference within MC noise") {
    const GmmSpec spec = scenarios::spec_synergy();
    const double direct = oracle::mc_cmi(spec, 0, {1}, 500000, 5);
    const double chained =
        oracle::mc_mi(spec, {0, 1}, 500000, 6) - oracle::mc_mi(spec, {1}, 500000, 7);
    CHECK(std::fabs(direct - chained) <= 5e-3);
}

TEST_CASE("oracle_decompose: unique scenario is purely unique") {
    const GmmSpec spec = scenarios::spec_unique();
    const auto r = oracle::oracle_decompose(spec, 0, 1e-3, 1000000, 11);
    CHECK(r.zmin.empty());
    CHECK(r.zmax.empty());
    CHECK(r.redundant == 0.0);
    CHECK(r.synergistic == 0.0);
    CHECK(r.unique == doctest::Approx(test_oracles::quadrature_mi_two_gaussians(1.0, -1.0)).epsilon(0.01));

    const auto r2 = oracle::oracle_decompose(spec, 1, 1e-3, 200000, 12);
    CHECK_FALSE(r2.mi_significant);
    CHECK(std::fabs(r2.unique) <= 5e-3);
    CHECK(std::fabs(r2.synergistic) <= 5e-3);
}

TEST_CASE("oracle_decompose: mixed6 synergy pair and null feature") {
    const GmmSpec spec = scenarios::spec_mixed6();
    const auto x4 = oracle::oracle_decompose(spec, 3, 1e-3, 200000, 13);
    CHECK(x4.zmax == std::vector<int>{4});
    CHECK(x4.synergistic > 0.02);  // theoretical value sits near 0.04 nats

    const auto x6 = oracle::oracle_decompose(spec, 5, 1e-3, 200000, 14);
    CHECK(x6.zmin.empty());
    CHECK(x6.zmax.empty());
    CHECK(std::fabs(x6.unique) <= 3e-3);
    CHECK(std::fabs(x6.redundant) <= 3e-3);
    CHECK(std::fabs(x6.synergistic) <= 3e-3);
}

TEST_CASE("GmmSpec validation catches bad priors and asymmetry") {
    GmmSpec spec = identical_two_class_spec();
    spec.classes[0].prior = 0.6;
    CHECK_THROWS_AS(spec.check(), Error);
    spec = identical_two_class_spec();
    spec.classes[1].cov[0][1] = 0.39;
    CHECK_THROWS_AS(spec.check(), NotPositiveDefiniteError);
}
