#ifndef INFODECOMP_ESTIMATOR_HPP
#define INFODECOMP_ESTIMATOR_HPP

#include <cstdint>
#include <vector>

#include <infodecomp/core.hpp>

// Mixed discrete/continuous MI and CMI between the class variable and feature
// subsets, via k-nearest-neighbor search with shared-radius projected
// counting: the k-th neighbor radius is found once per sample in the highest-
// dimensional space among same-class samples, and neighbors are then counted
// strictly inside that radius in every projected subspace. All quantities are
// in nats.

namespace infodecomp {

// psi(x) with absolute error <= 1e-12: upward recurrence to x >= 10, then the
// asymptotic expansion. Throws DomainError for x <= 0.
double digamma(double x);

class DigammaTable {
public:
    DigammaTable() = default;
    explicit DigammaTable(std::size_t max_arg);  // psi(1) .. psi(max_arg)
    double psi(long long arg) const { return table_[static_cast<std::size_t>(arg)]; }

private:
    std::vector<double> table_;
};

// Class-contiguous view of a validated dataset plus the estimator
// configuration. Samples are stably reordered so each class occupies one
// contiguous segment (within a class the original sample order is kept);
// columns are standardized here when config.standardize is set. Jittering is
// an explicit pipeline step and is never applied by the context.
class EstimatorContext {
public:
    EstimatorContext(const ValidatedDataset& dataset, EstimatorConfig config);

    std::size_t n() const { return sorted_labels_.size(); }
    std::size_t m() const { return columns_.size(); }
    std::size_t n_classes() const { return class_offsets_.size() - 1; }
    std::size_t class_begin(std::size_t y) const { return class_offsets_[y]; }
    std::size_t class_end(std::size_t y) const { return class_offsets_[y + 1]; }
    std::size_t class_count(std::size_t y) const { return class_offsets_[y + 1] - class_offsets_[y]; }
    int label_of(std::size_t sorted_index) const { return sorted_labels_[sorted_index]; }
    std::size_t to_original(std::size_t sorted_index) const { return to_original_[sorted_index]; }

    const double* column(int feature) const { return columns_[static_cast<std::size_t>(feature)].data(); }
    const std::vector<double>& column_vec(int feature) const { return columns_[static_cast<std::size_t>(feature)]; }

    const EstimatorConfig& config() const { return config_; }
    const DigammaTable& psi_table() const { return psi_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& class_alphabet() const { return class_alphabet_; }

private:
    std::vector<std::vector<double>> columns_;  // class-sorted sample order
    std::vector<std::size_t> class_offsets_;    // K + 1 entries
    std::vector<std::size_t> to_original_;
    std::vector<int> sorted_labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_alphabet_;
    EstimatorConfig config_;
    DigammaTable psi_;
};

// Per-sample radii and strict-inequality neighbor counts; indices follow the
// original (pre-sort) sample order. counts_within restricts to same-class
// samples; every count excludes the query sample. In the full search space
// the within-class count is k-1 when no distance ties occur (the k-th
// neighbor itself sits exactly on the radius and is excluded).
struct NeighborCounts {
    int k = 0;
    std::vector<int> search_space;
    std::vector<std::vector<int>> subspaces;
    std::vector<double> radii;
    std::vector<std::vector<std::int64_t>> counts_all;     // [subspace][sample]
    std::vector<std::vector<std::int64_t>> counts_within;  // [subspace][sample]
};

// Exact counting over all requested subspaces with shared radii from
// search_space. Throws EmptySearchSpaceError, ClassTooSmallError,
// DegenerateRadiusError.
NeighborCounts compute_counts(const EstimatorContext& ctx, const std::vector<int>& search_space,
                              const std::vector<std::vector<int>>& subspaces, int k);

struct MiEstimate {
    double total = 0.0;
    std::vector<double> specific;  // per class, nats
    std::vector<double> weight;    // N_y / N
};

// MI between the class and the feature set from precomputed counts. The full
// search space uses the psi(k) form, proper subspaces the projected form; an
// empty feature set is 0 by definition. Throws SubspaceNotCountedError.
MiEstimate mi_class_features(const EstimatorContext& ctx, const std::vector<int>& feature_set,
                             const NeighborCounts& counts);

// I(Y;X) with neighbor search and counting in the one-dimensional space {x}.
MiEstimate mi_standalone(const EstimatorContext& ctx, int x, int k);
// same, on an arbitrary column given in the context's sorted sample order
// (used by the surrogate test, which permutes the column)
MiEstimate mi_standalone_col(const EstimatorContext& ctx, const double* xcol, int k);

struct CmiPair {
    double with_v = 0.0;     // I(Y;X|Z,V)
    double without_v = 0.0;  // I(Y;X|Z)
};

// Both CMIs from a single shared-radius counting pass over the search space
// {x} u z u {v}.
CmiPair cmi_pair(const EstimatorContext& ctx, int x, const std::vector<int>& z, int v, int k);

struct FinalTriplet {
    double mi = 0.0;
    double cmi_zmin = 0.0;
    double cmi_zmax = 0.0;
};

// Final recomputation of I(Y;X), I(Y;X|Zmin), I(Y;X|Zmax) with the neighbor
// search space {x} u zmin u zmax shared by all terms.
FinalTriplet final_triplet(const EstimatorContext& ctx, int x, const std::vector<int>& zmin,
                           const std::vector<int>& zmax, int k);

// Fixed-(x, z) CMI-pair evaluator for the greedy search and surrogate loops:
// the Chebyshev distances of the fixed coordinates are precomputed once, so
// each candidate or permuted column costs one fused counting pass. Produces
// bit-identical values to cmi_pair.
class CmiWorkspace {
public:
    CmiWorkspace(const EstimatorContext& ctx, int x, std::vector<int> z);

    CmiPair eval_feature(int v) const;
    CmiPair eval_column(const double* v) const;  // sorted sample order, length n

    // Evaluates many candidate/surrogate columns in one pass over the
    // distance rows (each row stays cache-hot while every column is
    // processed), bit-identical to calling eval_column per column.
    void eval_batch(const double* const* columns, std::size_t count, CmiPair* out) const;

    int source() const { return x_; }
    const std::vector<int>& conditioning() const { return z_; }

private:
    void eval_batch_sorted(const double* const* columns, std::size_t count, CmiPair* out) const;
    void eval_batch_scan(const double* const* columns, std::size_t count, CmiPair* out) const;

    const EstimatorContext& ctx_;
    int x_;
    std::vector<int> z_;
    bool materialized_ = false;
    // samples reindexed so every class segment is ascending in x: fixed-part
    // neighbor candidates then live in contiguous windows around each query
    std::vector<std::uint32_t> xorder_;  // ctx index at each x-ordered position
    std::vector<double> xs_;             // x values in that order
    std::vector<double> dzx_;            // n*n z-part distances, columns x-ordered (z nonempty)
    std::vector<double> zero_row_;       // stands in for z distances in the scan fallback
};

}  // namespace infodecomp

#endif  // INFODECOMP_ESTIMATOR_HPP
