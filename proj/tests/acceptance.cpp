// Acceptance suite: one pass/fail line per criterion. Run with no arguments
// for all criteria or with a single criterion number. Exits nonzero when any
// executed criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include <infodecomp/decomp.hpp>
#include <infodecomp/io.hpp>
#include <infodecomp/oracle.hpp>
#include <infodecomp/parallel.hpp>
#include <infodecomp/pipeline.hpp>
#include <infodecomp/rng.hpp>
#include <infodecomp/scenarios.hpp>

#include "oracles.hpp"

using namespace infodecomp;

namespace {

constexpr int kThreads = 2;
constexpr long long kMc = 1000000;

struct Checker {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

EstimatorConfig default_config(std::uint64_t seed) {
    EstimatorConfig cfg;
    cfg.k = 10;
    cfg.n_surrogates = 100;
    cfg.alpha = 0.05;
    cfg.seed = seed;
    return cfg;
}

BatchOutput batch_scenario(const std::string& scenario, std::size_t n_per_class, int repeats, std::uint64_t seed,
                           std::size_t n_total_override = 0) {
    BatchSpec spec;
    spec.scenario = scenario;
    spec.n_per_class = n_per_class;
    spec.n_total_override = n_total_override;
    spec.repeats = repeats;
    spec.config = default_config(seed);
    spec.threads = kThreads;
    return run_batch(spec);
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// ---- criterion 1: unique scenario ----
bool criterion1() {
    const auto start = std::chrono::steady_clock::now();
    Checker c;

    const auto oracle_x1 = oracle::oracle_decompose(scenarios::spec_unique(), 0, 1e-3, kMc, 20260101);
    const BatchOutput out = batch_scenario("unique", 1000, 100, 101);
    const Aggregate& agg = out.aggregate;

    c.expect(std::fabs(agg.unique[0].mean - oracle_x1.unique) <= 0.03,
             "mean U(X1)=" + num(agg.unique[0].mean) + " vs oracle " + num(oracle_x1.unique));
    c.expect(std::fabs(agg.redundant[0].mean) <= 0.03, "mean R(X1)=" + num(agg.redundant[0].mean));
    c.expect(std::fabs(agg.synergistic[0].mean) <= 0.03, "mean S(X1)=" + num(agg.synergistic[0].mean));
    c.expect(std::fabs(agg.unique[1].mean) <= 0.03, "mean U(X2)=" + num(agg.unique[1].mean));
    c.expect(std::fabs(agg.redundant[1].mean) <= 0.03, "mean R(X2)=" + num(agg.redundant[1].mean));
    c.expect(std::fabs(agg.synergistic[1].mean) <= 0.03, "mean S(X2)=" + num(agg.synergistic[1].mean));
    c.expect(agg.mi_significant_pct[1] <= 10.0,
             "X2 flagged significant in " + num(agg.mi_significant_pct[1]) + "% of runs");

    const double secs = elapsed_s(start);
    c.expect(secs <= 120.0, "runtime " + num(secs) + "s exceeds 120s");
    std::printf("[%s] criterion 1: unique scenario bias/gate bounds (U(X1) %s vs oracle %s, %.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", num(agg.unique[0].mean).c_str(), num(oracle_x1.unique).c_str(), secs,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    return c.ok;
}

// ---- criterion 2: synergy scenario ----
bool criterion2() {
    const auto start = std::chrono::steady_clock::now();
    Checker c;

    const auto spec = scenarios::spec_synergy();
    const auto oracle_x1 = oracle::oracle_decompose(spec, 0, 1e-3, kMc, 20260102);
    const auto oracle_x2 = oracle::oracle_decompose(spec, 1, 1e-3, kMc, 20260103);
    const BatchOutput out = batch_scenario("synergy", 1000, 100, 202);
    const Aggregate& agg = out.aggregate;

    c.expect(std::fabs(agg.synergistic[0].mean - oracle_x1.synergistic) <= 0.03,
             "mean S(X1)=" + num(agg.synergistic[0].mean) + " vs oracle " + num(oracle_x1.synergistic));
    c.expect(std::fabs(agg.synergistic[1].mean - oracle_x2.synergistic) <= 0.03,
             "mean S(X2)=" + num(agg.synergistic[1].mean) + " vs oracle " + num(oracle_x2.synergistic));
    for (int x : {0, 1}) {
        c.expect(std::fabs(agg.unique[x].mean) <= 0.03, "mean U(X" + std::to_string(x + 1) + ")");
        c.expect(std::fabs(agg.redundant[x].mean) <= 0.03, "mean R(X" + std::to_string(x + 1) + ")");
    }
    int exact_partner[2] = {0, 0};
    for (const auto& run : out.runs)
        for (int x : {0, 1})
            if (run[x].zmax == std::vector<int>{1 - x}) ++exact_partner[x];
    c.expect(exact_partner[0] >= 95, "zmax(X1)={X2} in " + std::to_string(exact_partner[0]) + "/100");
    c.expect(exact_partner[1] >= 95, "zmax(X2)={X1} in " + std::to_string(exact_partner[1]) + "/100");

    // the generating law is exchangeable in X1 and X2, so the two
    // decompositions must agree within twice the empirical spread
    const double sd = std::max(agg.synergistic[0].sd, agg.synergistic[1].sd);
    c.expect(std::fabs(agg.synergistic[0].mean - agg.synergistic[1].mean) <= 2.0 * sd,
             "S(X1) vs S(X2) exchangeability");

    std::printf("[%s] criterion 2: synergy recovered (S(X1) %s vs oracle %s, partner picked %d/%d, %.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", num(agg.synergistic[0].mean).c_str(), num(oracle_x1.synergistic).c_str(),
                exact_partner[0], exact_partner[1], elapsed_s(start), c.detail.empty() ? "" : " -- ",
                c.detail.c_str());
    return c.ok;
}

// ---- criterion 3: redundancy scenario ----
bool criterion3() {
    const auto start = std::chrono::steady_clock::now();
    Checker c;

    const auto spec = scenarios::spec_redundancy();
    const auto oracle_x1 = oracle::oracle_decompose(spec, 0, 1e-3, kMc, 20260104);
    const BatchOutput out = batch_scenario("redundancy", 1000, 100, 303);
    const Aggregate& agg = out.aggregate;

    c.expect(std::fabs(agg.redundant[0].mean - oracle_x1.redundant) <= 0.05,
             "mean R(X1)=" + num(agg.redundant[0].mean) + " vs oracle " + num(oracle_x1.redundant));
    c.expect(std::fabs(agg.unique[0].mean) <= 0.05, "mean U(X1)=" + num(agg.unique[0].mean));
    int exact_twin[2] = {0, 0};
    for (const auto& run : out.runs)
        for (int x : {0, 1})
            if (run[x].zmin == std::vector<int>{1 - x}) ++exact_twin[x];
    c.expect(exact_twin[0] >= 95, "zmin(X1)={X2} in " + std::to_string(exact_twin[0]) + "/100");
    c.expect(exact_twin[1] >= 95, "zmin(X2)={X1} in " + std::to_string(exact_twin[1]) + "/100");

    std::printf("[%s] criterion 3: redundancy recovered (R(X1) %s vs oracle %s, twin picked %d/%d, %.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", num(agg.redundant[0].mean).c_str(), num(oracle_x1.redundant).c_str(),
                exact_twin[0], exact_twin[1], elapsed_s(start), c.detail.empty() ? "" : " -- ", c.detail.c_str());
    return c.ok;
}

// ---- criterion 4: mixed six-variable scenario ----
bool criterion4() {
    const auto start = std::chrono::steady_clock::now();
    Checker c;

    const auto spec = scenarios::spec_mixed6();
    std::vector<DecompositionResult> oracle_results(6);
    parallel_for(6, kThreads, [&](std::size_t x) {
        oracle_results[x] = oracle::oracle_decompose(spec, static_cast<int>(x), 1e-3, kMc, 20260105);
    });

    const BatchOutput out = batch_scenario("mixed6", 1000, 100, 404);
    const Aggregate& agg = out.aggregate;

    // (a) every component mean within 0.05 of the oracle
    for (int x = 0; x < 6; ++x) {
        const std::string fx = "X" + std::to_string(x + 1);
        c.expect(std::fabs(agg.unique[x].mean - oracle_results[x].unique) <= 0.05,
                 "U(" + fx + ")=" + num(agg.unique[x].mean) + " vs " + num(oracle_results[x].unique));
        c.expect(std::fabs(agg.redundant[x].mean - oracle_results[x].redundant) <= 0.05,
                 "R(" + fx + ")=" + num(agg.redundant[x].mean) + " vs " + num(oracle_results[x].redundant));
        c.expect(std::fabs(agg.synergistic[x].mean - oracle_results[x].synergistic) <= 0.05,
                 "S(" + fx + ")=" + num(agg.synergistic[x].mean) + " vs " + num(oracle_results[x].synergistic));
    }
    // (b) reciprocal synergy selection
    c.expect(agg.zmax_freq_pct[3][4] >= 95.0, "X5 in zmax(X4) " + num(agg.zmax_freq_pct[3][4]) + "%");
    c.expect(agg.zmax_freq_pct[4][3] >= 95.0, "X4 in zmax(X5) " + num(agg.zmax_freq_pct[4][3]) + "%");
    // (c) mean-shifted features condition one another in the min search
    const int shifted[4] = {0, 1, 2, 4};
    for (int s : shifted)
        for (int f : shifted) {
            if (s == f) continue;
            c.expect(agg.zmin_freq_pct[s][f] >= 90.0, "X" + std::to_string(f + 1) + " in zmin(X" +
                                                          std::to_string(s + 1) + ") " +
                                                          num(agg.zmin_freq_pct[s][f]) + "%");
        }
    // (d) the nuanced X4 inclusion for source X1
    c.expect(agg.zmin_freq_pct[0][3] >= 70.0 && agg.zmin_freq_pct[0][3] <= 100.0,
             "X4 in zmin(X1) " + num(agg.zmin_freq_pct[0][3]) + "%");
    // (e) the null feature contributes nothing and is rarely selected
    c.expect(std::fabs(agg.unique[5].mean) <= 0.03, "U(X6)=" + num(agg.unique[5].mean));
    c.expect(std::fabs(agg.redundant[5].mean) <= 0.03, "R(X6)=" + num(agg.redundant[5].mean));
    c.expect(std::fabs(agg.synergistic[5].mean) <= 0.03, "S(X6)=" + num(agg.synergistic[5].mean));
    for (int s = 0; s < 6; ++s) {
        if (s != 5) {
            c.expect(agg.zmin_freq_pct[s][5] <= 10.0, "X6 in zmin(X" + std::to_string(s + 1) + ")");
            c.expect(agg.zmax_freq_pct[s][5] <= 10.0, "X6 in zmax(X" + std::to_string(s + 1) + ")");
        }
    }
    for (int f = 0; f < 5; ++f) {
        c.expect(agg.zmin_freq_pct[5][f] <= 10.0, "spurious zmin(X6) pick of X" + std::to_string(f + 1));
        c.expect(agg.zmax_freq_pct[5][f] <= 10.0, "spurious zmax(X6) pick of X" + std::to_string(f + 1));
    }

    const double secs = elapsed_s(start);
    c.expect(secs <= 1200.0, "runtime " + num(secs) + "s exceeds 1200s");
    std::printf("[%s] criterion 4: mixed-6 component recovery and selection structure (%.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", secs, c.detail.empty() ? "" : " -- ", c.detail.c_str());
    return c.ok;
}

// ---- criterion 5: non-Gaussian Heaviside scenario ----
bool criterion5() {
    const auto start = std::chrono::steady_clock::now();
    Checker c;

    const BatchOutput big = batch_scenario("nongauss", 250, 100, 505, 1000);
    const BatchOutput small = batch_scenario("nongauss", 75, 100, 606, 300);
    const Aggregate& agg = big.aggregate;

    c.expect(agg.synergistic[0].mean > 0.05, "mean S(X1)=" + num(agg.synergistic[0].mean));
    c.expect(agg.synergistic[1].mean > 0.05, "mean S(X2)=" + num(agg.synergistic[1].mean));
    c.expect(agg.unique[2].mean > 0.05, "mean U(X3)=" + num(agg.unique[2].mean));
    c.expect(agg.unique[3].mean > 0.05, "mean U(X4)=" + num(agg.unique[3].mean));
    c.expect(agg.redundant[3].mean > 0.02, "mean R(X4)=" + num(agg.redundant[3].mean));
    c.expect(agg.zmin_freq_pct[3][4] >= 80.0, "X5 in zmin(X4) " + num(agg.zmin_freq_pct[3][4]) + "%");
    c.expect(std::fabs(agg.unique[5].mean) <= 0.03, "U(X6)=" + num(agg.unique[5].mean));
    c.expect(std::fabs(agg.redundant[5].mean) <= 0.03, "R(X6)=" + num(agg.redundant[5].mean));
    c.expect(std::fabs(agg.synergistic[5].mean) <= 0.03, "S(X6)=" + num(agg.synergistic[5].mean));
    c.expect(small.aggregate.synergistic[0].mean < agg.synergistic[0].mean,
             "S(X1) at N=300 (" + num(small.aggregate.synergistic[0].mean) + ") not below N=1000 (" +
                 num(agg.synergistic[0].mean) + ")");

    std::printf("[%s] criterion 5: Heaviside scenario structure and sample-size sensitivity "
                "(S(X1) %s at N=1000 vs %s at N=300, %.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", num(agg.synergistic[0].mean).c_str(),
                num(small.aggregate.synergistic[0].mean).c_str(), elapsed_s(start),
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    return c.ok;
}

// ---- criterion 6: estimator oracle equivalence ----
bool criterion6() {
    const auto start = std::chrono::steady_clock::now();
    Checker c;

    // exact equality with the brute-force counter on 50 random instances
    Rng rng(20260106);
    int exact_matches = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + rng.next_below(5);
        const std::size_t n_classes = 2 + rng.next_below(2);
        const std::size_t n_per_class = 20 + rng.next_below(500 / n_classes - 19);
        const int k = 1 + static_cast<int>(rng.next_below(10));

        Dataset ds;
        for (std::size_t f = 0; f < m; ++f) ds.feature_names.push_back("f" + std::to_string(f));
        for (std::size_t y = 0; y < n_classes; ++y) ds.class_alphabet.push_back("c" + std::to_string(y));
        ds.features.assign(m, {});
        Rng gen(rng.next_u64());
        for (std::size_t y = 0; y < n_classes; ++y)
            for (std::size_t i = 0; i < n_per_class; ++i) {
                ds.labels.push_back(static_cast<int>(y));
                for (std::size_t f = 0; f < m; ++f)
                    ds.features[f].push_back(gen.next_normal() + 0.4 * static_cast<double>(y));
            }

        EstimatorConfig cfg;
        cfg.k = k;
        cfg.standardize = false;
        const EstimatorContext ctx(validate(std::move(ds), cfg), cfg);

        std::vector<int> search;
        for (std::size_t f = 0; f < m; ++f) search.push_back(static_cast<int>(f));
        std::vector<std::vector<int>> subspaces{search, {0}};
        if (m >= 3) subspaces.push_back({2, 1});

        const auto got = compute_counts(ctx, search, subspaces, k);

        std::vector<std::vector<double>> table(ctx.n(), std::vector<double>(m));
        std::vector<int> labels(ctx.n());
        for (std::size_t s = 0; s < ctx.n(); ++s) {
            labels[ctx.to_original(s)] = ctx.label_of(s);
            for (std::size_t f = 0; f < m; ++f) table[ctx.to_original(s)][f] = ctx.column(static_cast<int>(f))[s];
        }
        const auto expected = test_oracles::brute_force_counts(table, labels, search, subspaces, k);

        bool same = got.radii == expected.radii;
        for (std::size_t s = 0; same && s < subspaces.size(); ++s)
            same = got.counts_all[s] == expected.counts_all[s] && got.counts_within[s] == expected.counts_within[s];
        if (same) ++exact_matches;
    }
    c.expect(exact_matches == 50, "brute-force equivalence " + std::to_string(exact_matches) + "/50");

    // 1-D quadrature agreement of the standalone estimator on the two-Gaussian mean-shift setup
    const double quad = test_oracles::quadrature_mi_two_gaussians(1.0, -1.0);
    std::vector<double> estimates(100);
    parallel_for(estimates.size(), kThreads, [&](std::size_t r) {
        auto g = scenarios::gen_unique(1000, 777000 + r);
        EstimatorConfig cfg = default_config(r);
        const EstimatorContext ctx(validate(std::move(g.data), cfg), cfg);
        estimates[r] = mi_standalone(ctx, 0, cfg.k).total;
    });
    const double mean_mi = test_oracles::mean_of(estimates);
    c.expect(std::fabs(mean_mi - quad) <= 0.02,
             "mean standalone MI " + num(mean_mi) + " vs quadrature " + num(quad));

    std::printf("[%s] criterion 6: estimator oracle equivalence (50 instances exact, MI %s vs quadrature %s, "
                "%.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", num(mean_mi).c_str(), num(quad).c_str(), elapsed_s(start),
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    return c.ok;
}

// ---- criterion 7: null calibration ----
bool criterion7() {
    const auto start = std::chrono::steady_clock::now();
    Checker c;

    int rejections[6] = {0, 0, 0, 0, 0, 0};
    std::vector<std::array<bool, 6>> flags(100);
    parallel_for(flags.size(), kThreads, [&](std::size_t r) {
        auto g = scenarios::gen_mixed6(1000, 1913000 + r);
        Rng shuffler(derive_stream(1913, {static_cast<std::uint64_t>(StreamPurpose::resample), r}));
        shuffler.shuffle(g.data.labels.data(), g.data.labels.size());

        EstimatorConfig cfg = default_config(r);
        const EstimatorContext ctx(validate(std::move(g.data), cfg), cfg);
        for (int x = 0; x < 6; ++x) flags[r][static_cast<std::size_t>(x)] = test_mi(ctx, x, 1).significant;
    });
    int total = 0;
    for (const auto& f : flags)
        for (int x = 0; x < 6; ++x) {
            rejections[x] += f[static_cast<std::size_t>(x)] ? 1 : 0;
            total += f[static_cast<std::size_t>(x)] ? 1 : 0;
        }
    for (int x = 0; x < 6; ++x)
        c.expect(rejections[x] <= 10,
                 "X" + std::to_string(x + 1) + " rejected " + std::to_string(rejections[x]) + "/100");
    // the exact level of "observed > 95th of 100 surrogates" is 6/101, so the
    // 600 pooled tests must land inside a 3-sigma band around 35.6 either way
    c.expect(total >= 18 && total <= 54, "pooled rejections " + std::to_string(total) + "/600 off calibration");

    // identical class-conditional distributions carry no information
    oracle::GmmSpec twin;
    twin.feature_names = {"a", "b"};
    twin.classes.resize(2);
    for (auto& cl : twin.classes) {
        cl.prior = 0.5;
        cl.mean = {0.2, -0.4};
        cl.cov = {{1.0, 0.3}, {0.3, 1.5}};
    }
    const double null_cmi = oracle::mc_cmi(twin, 0, {1}, kMc, 20260107);
    c.expect(std::fabs(null_cmi) <= 3e-3, "identical-class mc_cmi " + num(null_cmi));

    std::printf("[%s] criterion 7: null calibration (rejections %d/%d/%d/%d/%d/%d per 100, null CMI %s, "
                "%.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", rejections[0], rejections[1], rejections[2], rejections[3], rejections[4],
                rejections[5], num(null_cmi).c_str(), elapsed_s(start), c.detail.empty() ? "" : " -- ",
                c.detail.c_str());
    return c.ok;
}

// ---- criterion 8: CLI determinism across pool sizes ----
bool criterion8() {
    const auto start = std::chrono::steady_clock::now();
    Checker c;

    const std::string cli = INFODECOMP_CLI_PATH;
    const std::string r1 = "/tmp/infodecomp_acc_batch_t1.json";
    const std::string r8 = "/tmp/infodecomp_acc_batch_t8.json";
    const std::string base = " batch --scenario mixed6 --repeats 5 --seed 42 ";
    const int rc1 = std::system((cli + base + "--threads 1 --out " + r1 + " > /dev/null").c_str());
    const int rc8 = std::system((cli + base + "--threads 8 --out " + r8 + " > /dev/null").c_str());
    c.expect(WEXITSTATUS(rc1) == 0, "threads=1 run failed");
    c.expect(WEXITSTATUS(rc8) == 0, "threads=8 run failed");

    std::string h1 = "?", h8 = "!";
    if (c.ok) {
        const auto j1 = nlohmann::json::parse(read_text_file(r1));
        const auto j8 = nlohmann::json::parse(read_text_file(r8));
        h1 = j1.at("determinism_hash").get<std::string>();
        h8 = j8.at("determinism_hash").get<std::string>();
        c.expect(h1 == h8, "hashes differ: " + h1 + " vs " + h8);
        std::remove(r1.c_str());
        std::remove(r8.c_str());
    }

    std::printf("[%s] criterion 8: batch determinism across thread counts (%s, %.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", h1.c_str(), elapsed_s(start), c.detail.empty() ? "" : " -- ",
                c.detail.c_str());
    return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                            criterion5, criterion6, criterion7, criterion8};
    bool all_ok = true;
    for (int i = 0; i < 8; ++i) {
        if (only != 0 && only != i + 1) continue;
        try {
            all_ok = criteria[i]() && all_ok;
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion %d: exception: %s\n", i + 1, e.what());
            all_ok = false;
        }
    }
    return all_ok ? 0 : 1;
}
