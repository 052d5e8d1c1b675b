#ifndef INFODECOMP_TESTS_ORACLES_HPP
#define INFODECOMP_TESTS_ORACLES_HPP

// Independent reference implementations used only by the tests. They share
// no code with the library paths they check: the counter is a plain O(N^2)
// nested loop, the digamma reference differentiates lgammal, and the MI
// reference integrates the class-conditional densities by quadrature.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <infodecomp/core.hpp>

namespace test_oracles {

// ---- digamma via central differences of lgammal with Richardson step ----
// Small arguments are first lifted to x >= 8 with the exact recurrence
// psi(x) = psi(x+1) - 1/x, where lgammal's higher derivatives are tame.
inline double reference_digamma(double x) {
    long double shift = 0.0L;
    long double xl = x;
    while (xl < 8.0L) {
        shift -= 1.0L / xl;
        xl += 1.0L;
    }
    const auto d5 = [&](long double h) {
        const long double num = -std::lgammal(xl + 2 * h) + 8 * std::lgammal(xl + h) - 8 * std::lgammal(xl - h) +
                                std::lgammal(xl - 2 * h);
        return num / (12 * h);
    };
    // two five-point stencils, Richardson-extrapolated in h^4
    const long double h = 1e-2L * std::max(1.0L, xl / 16.0L);
    const long double a = d5(h);
    const long double b = d5(h / 2);
    return static_cast<double>(shift + (16 * b - a) / 15);
}

// ---- O(N^2) all-pairs counter over an explicit row-major sample table ----
struct BruteCounts {
    std::vector<double> radii;
    std::vector<std::vector<std::int64_t>> counts_all;     // [subspace][sample]
    std::vector<std::vector<std::int64_t>> counts_within;  // [subspace][sample]
};

inline double chebyshev(const std::vector<std::vector<double>>& rows, std::size_t a, std::size_t b,
                        const std::vector<int>& dims) {
    double d = 0.0;
    for (int c : dims) d = std::max(d, std::fabs(rows[a][static_cast<std::size_t>(c)] -
                                                 rows[b][static_cast<std::size_t>(c)]));
    return d;
}

inline BruteCounts brute_force_counts(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                                      const std::vector<int>& search_space,
                                      const std::vector<std::vector<int>>& subspaces, int k) {
    const std::size_t n = rows.size();
    BruteCounts out;
    out.radii.resize(n);
    out.counts_all.assign(subspaces.size(), std::vector<std::int64_t>(n, 0));
    out.counts_within.assign(subspaces.size(), std::vector<std::int64_t>(n, 0));

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> same_class;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || labels[j] != labels[i]) continue;
            same_class.push_back(chebyshev(rows, i, j, search_space));
        }
        std::sort(same_class.begin(), same_class.end());
        const double r = same_class[static_cast<std::size_t>(k - 1)];
        out.radii[i] = r;

        for (std::size_t s = 0; s < subspaces.size(); ++s) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d = subspaces[s].empty() ? 0.0 : chebyshev(rows, i, j, subspaces[s]);
                if (d < r) {
                    ++out.counts_all[s][i];
                    if (labels[j] == labels[i]) ++out.counts_within[s][i];
                }
            }
        }
    }
    return out;
}

inline std::vector<std::vector<double>> dataset_rows(const infodecomp::Dataset& ds) {
    std::vector<std::vector<double>> rows(ds.n_samples(), std::vector<double>(ds.n_features()));
    for (std::size_t i = 0; i < ds.n_samples(); ++i)
        for (std::size_t c = 0; c < ds.n_features(); ++c) rows[i][c] = ds.features[c][i];
    return rows;
}

// ---- adaptive Simpson quadrature ----
inline double simpson(const std::function<double(double)>& f, double a, double b, int n_half) {
    // composite Simpson with 2*n_half intervals
    const double h = (b - a) / (2.0 * n_half);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * n_half; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// I(Y;X) in nats for a 1-D equal-prior mixture of N(mu1,1) and N(mu2,1)
inline double quadrature_mi_two_gaussians(double mu1, double mu2) {
    const auto phi = [](double x, double mu) {
        const double d = x - mu;
        return std::exp(-0.5 * d * d) / std::sqrt(2.0 * M_PI);
    };
    const auto integrand = [&](double x) {
        const double p1 = phi(x, mu1), p2 = phi(x, mu2);
        const double mix = 0.5 * p1 + 0.5 * p2;
        double acc = 0.0;
        if (p1 > 0.0) acc += 0.5 * p1 * std::log(p1 / mix);
        if (p2 > 0.0) acc += 0.5 * p2 * std::log(p2 / mix);
        return acc;
    };
    const double lo = std::min(mu1, mu2) - 10.0, hi = std::max(mu1, mu2) + 10.0;
    return simpson(integrand, lo, hi, 4000);
}

// ---- small sample statistics ----
inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Kolmogorov-Smirnov statistic against the standard normal CDF
inline double ks_statistic_std_normal(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-sample[i] / std::sqrt(2.0));
        worst = std::max(worst, std::fabs(cdf - static_cast<double>(i) / n));
        worst = std::max(worst, std::fabs(static_cast<double>(i + 1) / n - cdf));
    }
    return worst;
}

}  // namespace test_oracles

#endif  // INFODECOMP_TESTS_ORACLES_HPP
