#include <infodecomp/decomp.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <infodecomp/parallel.hpp>
#include <infodecomp/rng.hpp>

namespace infodecomp {

DecompositionResult decompose(const EstimatorContext& ctx, int x, int threads) {
    const int k = ctx.config().k;

    const SurrogateTest gate = test_mi(ctx, x, threads);

    GreedyResult min_res;  // insignificant MI: no unique/redundant content, Zmin stays empty
    if (gate.significant) min_res = greedy_search(ctx, x, Direction::min, threads);
    // the max search always runs: purely synergistic features have mi ~ 0
    GreedyResult max_res = greedy_search(ctx, x, Direction::max, threads);

    const FinalTriplet t = final_triplet(ctx, x, min_res.selected, max_res.selected, k);

    DecompositionResult r;
    r.source_index = x;
    r.mi = t.mi;
    r.mi_significant = gate.significant;
    r.cmi_zmin = t.cmi_zmin;
    r.cmi_zmax = t.cmi_zmax;
    r.unique = t.cmi_zmin;
    r.redundant = t.mi - t.cmi_zmin;
    r.synergistic = t.cmi_zmax - t.mi;
    r.zmin = std::move(min_res.selected);
    r.zmax = std::move(max_res.selected);
    r.trace_min = std::move(min_res.trace);
    r.trace_max = std::move(max_res.trace);
    return r;
}

std::vector<DecompositionResult> decompose_all(const ValidatedDataset& dataset, const EstimatorConfig& config,
                                               int threads) {
    EstimatorContext ctx(dataset, config);
    std::vector<DecompositionResult> results(ctx.m());
    if (threads > 1 && ctx.m() > 1) {
        parallel_for(ctx.m(), threads, [&](std::size_t x) { results[x] = decompose(ctx, static_cast<int>(x), 1); });
    } else {
        for (std::size_t x = 0; x < ctx.m(); ++x) results[x] = decompose(ctx, static_cast<int>(x), threads);
    }
    return results;
}

bool result_identities_ok(const DecompositionResult& r) {
    if (r.unique != r.cmi_zmin) return false;
    if (r.redundant != r.mi - r.cmi_zmin) return false;
    if (r.synergistic != r.cmi_zmax - r.mi) return false;
    // exact in real arithmetic by construction; IEEE addition of the three
    // stored differences can drift by a few units in the last place of the
    // largest ingredient
    const double sum = r.unique + r.redundant + r.synergistic;
    const double scale = std::max({std::fabs(r.mi), std::fabs(r.cmi_zmin), std::fabs(r.cmi_zmax), 1.0e-300});
    if (std::fabs(sum - r.cmi_zmax) > 4.0 * scale * std::numeric_limits<double>::epsilon()) return false;
    for (int f : r.zmin)
        if (f == r.source_index) return false;
    for (int f : r.zmax)
        if (f == r.source_index) return false;
    if (!r.mi_significant && (!r.zmin.empty() || r.redundant != 0.0)) return false;
    return true;
}

Aggregate aggregate_runs(const std::vector<std::vector<DecompositionResult>>& runs,
                         std::vector<std::string> feature_names) {
    Aggregate agg;
    agg.n_repeats = runs.size();
    agg.feature_names = std::move(feature_names);
    const std::size_t m = agg.feature_names.size();
    const double n = static_cast<double>(runs.size());

    auto stat_of = [&](auto&& getter) {
        std::vector<Stat> stats(m);
        for (std::size_t f = 0; f < m; ++f) {
            double mean = 0.0;
            for (const auto& run : runs) mean += getter(run[f]);
            mean /= n;
            double ss = 0.0;
            for (const auto& run : runs) {
                const double d = getter(run[f]) - mean;
                ss += d * d;
            }
            stats[f].mean = mean;
            stats[f].sd = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        }
        return stats;
    };

    agg.mi = stat_of([](const DecompositionResult& r) { return r.mi; });
    agg.cmi_zmin = stat_of([](const DecompositionResult& r) { return r.cmi_zmin; });
    agg.cmi_zmax = stat_of([](const DecompositionResult& r) { return r.cmi_zmax; });
    agg.unique = stat_of([](const DecompositionResult& r) { return r.unique; });
    agg.redundant = stat_of([](const DecompositionResult& r) { return r.redundant; });
    agg.synergistic = stat_of([](const DecompositionResult& r) { return r.synergistic; });

    std::size_t max_iter_min = 0, max_iter_max = 0;
    for (const auto& run : runs) {
        for (std::size_t f = 0; f < m; ++f) {
            max_iter_min = std::max(max_iter_min, run[f].zmin.size());
            max_iter_max = std::max(max_iter_max, run[f].zmax.size());
        }
    }

    // integer counts first: 100 * count / n is exact at the boundaries
    std::vector<long long> sig_count(m, 0);
    std::vector<std::vector<long long>> zmin_count(m, std::vector<long long>(m, 0));
    std::vector<std::vector<long long>> zmax_count(m, std::vector<long long>(m, 0));
    std::vector<std::vector<std::vector<long long>>> omin(m, std::vector<std::vector<long long>>(
                                                                 max_iter_min, std::vector<long long>(m, 0)));
    std::vector<std::vector<std::vector<long long>>> omax(m, std::vector<std::vector<long long>>(
                                                                 max_iter_max, std::vector<long long>(m, 0)));
    for (const auto& run : runs) {
        for (std::size_t f = 0; f < m; ++f) {
            if (run[f].mi_significant) ++sig_count[f];
            for (std::size_t j = 0; j < run[f].zmin.size(); ++j) {
                const auto sel = static_cast<std::size_t>(run[f].zmin[j]);
                ++zmin_count[f][sel];
                ++omin[f][j][sel];
            }
            for (std::size_t j = 0; j < run[f].zmax.size(); ++j) {
                const auto sel = static_cast<std::size_t>(run[f].zmax[j]);
                ++zmax_count[f][sel];
                ++omax[f][j][sel];
            }
        }
    }

    const auto to_pct = [&](long long count) { return 100.0 * static_cast<double>(count) / n; };
    agg.mi_significant_pct.assign(m, 0.0);
    agg.zmin_freq_pct.assign(m, std::vector<double>(m, 0.0));
    agg.zmax_freq_pct.assign(m, std::vector<double>(m, 0.0));
    agg.order_min_pct.assign(m, std::vector<std::vector<double>>(max_iter_min, std::vector<double>(m, 0.0)));
    agg.order_max_pct.assign(m, std::vector<std::vector<double>>(max_iter_max, std::vector<double>(m, 0.0)));
    for (std::size_t f = 0; f < m; ++f) {
        agg.mi_significant_pct[f] = to_pct(sig_count[f]);
        for (std::size_t g = 0; g < m; ++g) {
            agg.zmin_freq_pct[f][g] = to_pct(zmin_count[f][g]);
            agg.zmax_freq_pct[f][g] = to_pct(zmax_count[f][g]);
        }
        for (std::size_t j = 0; j < max_iter_min; ++j)
            for (std::size_t g = 0; g < m; ++g) agg.order_min_pct[f][j][g] = to_pct(omin[f][j][g]);
        for (std::size_t j = 0; j < max_iter_max; ++j)
            for (std::size_t g = 0; g < m; ++g) agg.order_max_pct[f][j][g] = to_pct(omax[f][j][g]);
    }
    return agg;
}

Dataset stratified_resample(const ValidatedDataset& dataset, std::uint64_t stream_seed) {
    const Dataset& src = dataset.data;
    const std::size_t n = src.n_samples();
    const std::size_t m = src.n_features();

    std::vector<std::vector<std::size_t>> by_class(src.n_classes());
    for (std::size_t i = 0; i < n; ++i) by_class[src.labels[i]].push_back(i);

    Rng rng(stream_seed);
    std::vector<std::size_t> picks;
    picks.reserve(n);
    for (std::size_t y = 0; y < by_class.size(); ++y) {
        const auto& rows = by_class[y];
        for (std::size_t t = 0; t < rows.size(); ++t) picks.push_back(rows[rng.next_below(rows.size())]);
    }

    Dataset out;
    out.feature_names = src.feature_names;
    out.class_alphabet = src.class_alphabet;
    out.labels.reserve(n);
    out.features.assign(m, {});
    for (auto& col : out.features) col.reserve(n);
    for (std::size_t i : picks) {
        out.labels.push_back(src.labels[i]);
        for (std::size_t c = 0; c < m; ++c) out.features[c].push_back(src.features[c][i]);
    }
    return out;
}

Aggregate bootstrap_decompose(const ValidatedDataset& dataset, const EstimatorConfig& config, int n_repeats,
                              int threads) {
    if (n_repeats < 1) throw Error("n_repeats must be positive");
    std::vector<std::vector<DecompositionResult>> runs(static_cast<std::size_t>(n_repeats));

    parallel_for(runs.size(), threads, [&](std::size_t rep) {
        const std::uint64_t resample_seed =
            derive_stream(config.seed, {static_cast<std::uint64_t>(StreamPurpose::resample), rep});
        Dataset sample = stratified_resample(dataset, resample_seed);

        EstimatorConfig rep_config = config;
        rep_config.seed = derive_stream(config.seed, {static_cast<std::uint64_t>(StreamPurpose::repeat), rep});
        sample = jitter(sample, rep_config);

        ValidatedDataset validated = validate(std::move(sample), rep_config);
        runs[rep] = decompose_all(validated, rep_config, 1);
    });

    return aggregate_runs(runs, dataset.data.feature_names);
}

}  // namespace infodecomp
