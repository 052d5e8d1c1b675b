#ifndef INFODECOMP_ORACLE_HPP
#define INFODECOMP_ORACLE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <infodecomp/core.hpp>

// Ground-truth engine: class-conditional Gaussians with known parameters make
// the joint feature density a Gaussian mixture, so conditional mutual
// information can be evaluated to Monte-Carlo precision and the greedy
// searches can be replayed against exact scores.

namespace infodecomp::oracle {

struct GmmClass {
    double prior = 0.0;
    std::vector<double> mean;
    std::vector<std::vector<double>> cov;  // row-major, symmetric positive definite
};

struct GmmSpec {
    std::vector<GmmClass> classes;
    std::vector<std::string> feature_names;

    std::size_t dim() const { return classes.empty() ? 0 : classes.front().mean.size(); }
    // priors sum to 1 within 1e-12, covs symmetric and Cholesky-factorizable,
    // dimensions consistent; throws Error / NotPositiveDefiniteError
    void check() const;
};

// Lower-triangular factorization of an SPD matrix; throws
// NotPositiveDefiniteError when a pivot is not strictly positive.
class Cholesky {
public:
    explicit Cholesky(const std::vector<std::vector<double>>& cov);

    std::size_t dim() const { return d_; }
    double logpdf(std::span<const double> point, std::span<const double> mean) const;
    // out = mean + L u, u standard normal
    void transform(std::span<const double> u, std::span<const double> mean, std::span<double> out) const;

private:
    std::size_t d_ = 0;
    std::vector<double> lower_;  // row-major d x d, upper half unused
    double log_det_sqrt_ = 0.0;  // sum of log L_ii
};

// Exact multivariate normal log-density via triangular factorization.
double gaussian_logpdf(std::span<const double> point, std::span<const double> mean,
                       const std::vector<std::vector<double>>& cov);

// Log-density of the prior-weighted mixture marginalized onto the given
// coordinate subset (Gaussian marginalization: sub-mean and sub-cov),
// max-shifted for underflow safety.
double gmm_logpdf(const GmmSpec& spec, std::span<const double> point, std::span<const int> subset);

// n i.i.d. draws from class y, column-major [dim][n]; deterministic per seed.
std::vector<std::vector<double>> sample_class(const GmmSpec& spec, std::size_t class_index, std::size_t n,
                                              std::uint64_t seed);

// I(Y; subset) by Monte-Carlo over each class-conditional density.
double mc_mi(const GmmSpec& spec, const std::vector<int>& subset, long long n_mc, std::uint64_t seed);

// I(Y; x | z) by direct Monte-Carlo evaluation of the conditional log-ratio,
// class by class, combined with the prior weights. z may be empty.
double mc_cmi(const GmmSpec& spec, int x, const std::vector<int>& z, long long n_mc, std::uint64_t seed);

// Greedy min/max searches driven by mc_cmi scores with a deterministic
// acceptance threshold tol instead of surrogate tests; yields the theoretical
// U/R/S decomposition and selection sets.
DecompositionResult oracle_decompose(const GmmSpec& spec, int x, double tol, long long n_mc, std::uint64_t seed);

}  // namespace infodecomp::oracle

#endif  // INFODECOMP_ORACLE_HPP
