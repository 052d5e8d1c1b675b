#include <infodecomp/search.hpp>

#include <algorithm>
#include <cmath>

#include <infodecomp/parallel.hpp>
#include <infodecomp/rng.hpp>

namespace infodecomp {

double surrogate_threshold(std::vector<double> values, double alpha) {
    const auto n = static_cast<long long>(values.size());
    // the 1e-9 slack keeps fl(1-alpha)*n from landing one order statistic too
    // high (0.95 * 100 rounds just above 95)
    long long rank = static_cast<long long>(std::ceil((1.0 - alpha) * static_cast<double>(n) - 1e-9));
    rank = std::clamp<long long>(rank, 1, n);
    std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
    return values[static_cast<std::size_t>(rank - 1)];
}

SurrogateTest test_mi(const EstimatorContext& ctx, int x, int threads) {
    const auto& cfg = ctx.config();
    SurrogateTest out;
    out.observed = mi_standalone(ctx, x, cfg.k).total;
    out.surrogate_values.resize(static_cast<std::size_t>(cfg.n_surrogates));

    parallel_for(out.surrogate_values.size(), threads, [&](std::size_t s) {
        Rng rng(derive_stream(cfg.seed, {static_cast<std::uint64_t>(StreamPurpose::mi_surrogate),
                                         static_cast<std::uint64_t>(x), s}));
        std::vector<double> col = ctx.column_vec(x);
        rng.shuffle(col.data(), col.size());
        out.surrogate_values[s] = mi_standalone_col(ctx, col.data(), cfg.k).total;
    });

    out.threshold = surrogate_threshold(out.surrogate_values, cfg.alpha);
    out.significant = out.observed > out.threshold;
    return out;
}

namespace {

double directed_delta(const CmiPair& pair, Direction direction) {
    return direction == Direction::min ? pair.without_v - pair.with_v : pair.with_v - pair.without_v;
}

// shared by test_delta and the greedy loop so the workspace (and the observed
// pair) is built once per iteration
SurrogateTest run_delta_test(const EstimatorContext& ctx, const CmiWorkspace& ws, const CmiPair& observed_pair,
                             int x, int v, Direction direction, int iteration, int threads) {
    const auto& cfg = ctx.config();
    const std::size_t n_surr = static_cast<std::size_t>(cfg.n_surrogates);
    SurrogateTest out;
    out.observed = directed_delta(observed_pair, direction);
    out.surrogate_values.resize(n_surr);

    // all permuted columns up front, then batched evaluation in fixed blocks:
    // each block makes one pass over the distance rows for all its columns
    const auto purpose = direction == Direction::min ? StreamPurpose::min_surrogate : StreamPurpose::max_surrogate;
    std::vector<std::vector<double>> permuted(n_surr);
    for (std::size_t s = 0; s < n_surr; ++s) {
        Rng rng(derive_stream(cfg.seed, {static_cast<std::uint64_t>(purpose), static_cast<std::uint64_t>(x),
                                         static_cast<std::uint64_t>(iteration), s}));
        permuted[s] = ctx.column_vec(v);
        rng.shuffle(permuted[s].data(), permuted[s].size());
    }

    const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n_surr));
    parallel_for(blocks, static_cast<int>(blocks), [&](std::size_t b) {
        const std::size_t lo = b * n_surr / blocks;
        const std::size_t hi = (b + 1) * n_surr / blocks;
        if (lo >= hi) return;
        std::vector<const double*> cols(hi - lo);
        for (std::size_t s = lo; s < hi; ++s) cols[s - lo] = permuted[s].data();
        std::vector<CmiPair> pairs(hi - lo);
        ws.eval_batch(cols.data(), cols.size(), pairs.data());
        for (std::size_t s = lo; s < hi; ++s) out.surrogate_values[s] = directed_delta(pairs[s - lo], direction);
    });

    out.threshold = surrogate_threshold(out.surrogate_values, cfg.alpha);
    out.significant = out.observed > out.threshold;
    return out;
}

}  // namespace

SurrogateTest test_delta(const EstimatorContext& ctx, int x, const std::vector<int>& z, int v, Direction direction,
                         int iteration, int threads) {
    CmiWorkspace ws(ctx, x, z);
    const CmiPair pair = ws.eval_feature(v);
    return run_delta_test(ctx, ws, pair, x, v, direction, iteration, threads);
}

GreedyResult greedy_search(const EstimatorContext& ctx, int x, Direction direction, int threads) {
    GreedyResult result;
    std::vector<int> remaining;
    for (int f = 0; f < static_cast<int>(ctx.m()); ++f)
        if (f != x) remaining.push_back(f);

    bool have_chain = false;
    double chain_value = 0.0;
    int iteration = 1;

    while (!remaining.empty()) {
        CmiWorkspace ws(ctx, x, result.selected);

        std::vector<const double*> candidate_cols(remaining.size());
        for (std::size_t c = 0; c < remaining.size(); ++c) candidate_cols[c] = ctx.column(remaining[c]);
        std::vector<CmiPair> pairs(remaining.size());
        ws.eval_batch(candidate_cols.data(), candidate_cols.size(), pairs.data());

        // argmin/argmax of the conditional MI with the candidate included;
        // remaining is ascending, so strict comparison breaks ties low
        std::size_t best = 0;
        for (std::size_t c = 1; c < remaining.size(); ++c) {
            const bool better = direction == Direction::min ? pairs[c].with_v < pairs[best].with_v
                                                            : pairs[c].with_v > pairs[best].with_v;
            if (better) best = c;
        }
        const int v = remaining[best];
        const CmiPair best_pair = pairs[best];

        const SurrogateTest test = run_delta_test(ctx, ws, best_pair, x, v, direction, iteration, threads);
        // a significant but non-positive "improvement" is never kept: the
        // accepted CMI sequence must move strictly in the search direction
        const bool accepted = test.significant && test.observed > 0.0;

        TraceIteration record;
        record.candidate_scores.reserve(remaining.size());
        for (std::size_t c = 0; c < remaining.size(); ++c)
            record.candidate_scores.emplace_back(remaining[c], pairs[c].with_v);
        record.selected = v;
        record.cmi_before = have_chain ? chain_value : best_pair.without_v;
        record.surrogate_threshold = test.threshold;
        record.accepted = accepted;
        record.cmi_after = accepted ? (direction == Direction::min ? record.cmi_before - test.observed
                                                                   : record.cmi_before + test.observed)
                                    : record.cmi_before;
        result.trace.iterations.push_back(std::move(record));

        if (!accepted) break;
        chain_value = result.trace.iterations.back().cmi_after;
        have_chain = true;
        result.selected.push_back(v);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        ++iteration;
    }
    return result;
}

}  // namespace infodecomp
