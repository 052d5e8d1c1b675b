#ifndef INFODECOMP_SEARCH_HPP
#define INFODECOMP_SEARCH_HPP

#include <vector>

#include <infodecomp/estimator.hpp>

// Greedy construction of the CMI-minimizing and CMI-maximizing conditioning
// sets with permutation-surrogate stopping rules. Surrogate permutation
// streams are derived from (seed, source index, direction, iteration,
// surrogate index), so parallel execution reproduces serial results.

namespace infodecomp {

enum class Direction { min, max };

struct SurrogateTest {
    double observed = 0.0;
    std::vector<double> surrogate_values;
    double threshold = 0.0;  // empirical (1-alpha) quantile of the surrogates
    bool significant = false;
};

// ceil((1-alpha) * n)-th order statistic, 1-based
double surrogate_threshold(std::vector<double> values, double alpha);

// Tests I(Y;X) > 0 against surrogates that shuffle the x column.
SurrogateTest test_mi(const EstimatorContext& ctx, int x, int threads = 1);

// Tests the one-sided CMI change contributed by candidate v given z:
// observed is I(Y;X|z) - I(Y;X|z,v) for Direction::min and the negated
// difference for Direction::max; surrogates shuffle the v column and
// recompute both terms with the shared-radius scheme.
SurrogateTest test_delta(const EstimatorContext& ctx, int x, const std::vector<int>& z, int v, Direction direction,
                         int iteration = 1, int threads = 1);

struct GreedyResult {
    std::vector<int> selected;  // in selection order
    SearchTrace trace;
};

// Starting from the empty set, each iteration scores every remaining
// candidate, picks the argmin/argmax of the conditional MI (ties to the
// lowest feature index), and keeps it only when the surrogate test accepts a
// strictly positive improvement. The trace records chain-consistent CMI
// values: cmi_before of the next iteration always equals cmi_after of the
// previous one.
GreedyResult greedy_search(const EstimatorContext& ctx, int x, Direction direction, int threads = 1);

}  // namespace infodecomp

#endif  // INFODECOMP_SEARCH_HPP
