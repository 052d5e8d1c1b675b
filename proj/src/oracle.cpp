#include <infodecomp/oracle.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <infodecomp/rng.hpp>
#include <infodecomp/search.hpp>

namespace infodecomp::oracle {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112353;  // log(2*pi)

std::vector<double> subvec(const std::vector<double>& v, std::span<const int> idx) {
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[static_cast<std::size_t>(idx[i])];
    return out;
}

std::vector<std::vector<double>> submat(const std::vector<std::vector<double>>& m, std::span<const int> idx) {
    std::vector<std::vector<double>> out(idx.size(), std::vector<double>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            out[i][j] = m[static_cast<std::size_t>(idx[i])][static_cast<std::size_t>(idx[j])];
    return out;
}

}  // namespace

void GmmSpec::check() const {
    if (classes.empty()) throw Error("GmmSpec needs at least one class");
    const std::size_t d = dim();
    if (d == 0) throw Error("GmmSpec needs at least one feature");
    if (!feature_names.empty() && feature_names.size() != d)
        throw Error("GmmSpec feature_names length does not match the dimension");
    double prior_sum = 0.0;
    for (const auto& c : classes) {
        if (!(c.prior > 0.0 && c.prior <= 1.0)) throw Error("GmmSpec class priors must lie in (0, 1]");
        prior_sum += c.prior;
        if (c.mean.size() != d) throw Error("GmmSpec class means must share one dimension");
        if (c.cov.size() != d) throw Error("GmmSpec covariance has wrong row count");
        for (std::size_t i = 0; i < d; ++i) {
            if (c.cov[i].size() != d) throw Error("GmmSpec covariance is not square");
            for (std::size_t j = 0; j < i; ++j) {
                if (c.cov[i][j] != c.cov[j][i]) throw NotPositiveDefiniteError("covariance is not symmetric");
            }
        }
        Cholesky factor(c.cov);  // throws when not positive definite
    }
    if (std::fabs(prior_sum - 1.0) > 1e-12) throw Error("GmmSpec priors must sum to 1");
}

Cholesky::Cholesky(const std::vector<std::vector<double>>& cov) : d_(cov.size()) {
    lower_.assign(d_ * d_, 0.0);
    for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = cov[i][j];
            for (std::size_t t = 0; t < j; ++t) sum -= lower_[i * d_ + t] * lower_[j * d_ + t];
            if (i == j) {
                if (!(sum > 0.0)) throw NotPositiveDefiniteError("covariance pivot " + std::to_string(i) +
                                                                 " is not strictly positive");
                lower_[i * d_ + i] = std::sqrt(sum);
                log_det_sqrt_ += std::log(lower_[i * d_ + i]);
            } else {
                lower_[i * d_ + j] = sum / lower_[j * d_ + j];
            }
        }
    }
}

double Cholesky::logpdf(std::span<const double> point, std::span<const double> mean) const {
    // forward substitution of L w = (x - mu); |w|^2 is the quadratic form
    double quad = 0.0;
    std::vector<double> w(d_);
    for (std::size_t i = 0; i < d_; ++i) {
        double sum = point[i] - mean[i];
        for (std::size_t t = 0; t < i; ++t) sum -= lower_[i * d_ + t] * w[t];
        w[i] = sum / lower_[i * d_ + i];
        quad += w[i] * w[i];
    }
    return -0.5 * (static_cast<double>(d_) * kLogTwoPi + quad) - log_det_sqrt_;
}

void Cholesky::transform(std::span<const double> u, std::span<const double> mean, std::span<double> out) const {
    for (std::size_t i = 0; i < d_; ++i) {
        double acc = mean[i];
        for (std::size_t t = 0; t <= i; ++t) acc += lower_[i * d_ + t] * u[t];
        out[i] = acc;
    }
}

double gaussian_logpdf(std::span<const double> point, std::span<const double> mean,
                       const std::vector<std::vector<double>>& cov) {
    Cholesky factor(cov);
    return factor.logpdf(point, mean);
}

namespace {

double gmm_logpdf_cached(const GmmSpec& spec, const std::vector<Cholesky>& factors,
                         const std::vector<std::vector<double>>& means, std::span<const double> point) {
    std::vector<double> terms(spec.classes.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < spec.classes.size(); ++y) {
        terms[y] = std::log(spec.classes[y].prior) + factors[y].logpdf(point, means[y]);
        top = std::max(top, terms[y]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - top);
    return top + std::log(acc);
}

struct MarginalGmm {
    std::vector<Cholesky> factors;
    std::vector<std::vector<double>> means;
};

MarginalGmm marginal_gmm(const GmmSpec& spec, std::span<const int> subset) {
    MarginalGmm out;
    out.factors.reserve(spec.classes.size());
    out.means.reserve(spec.classes.size());
    for (const auto& c : spec.classes) {
        out.factors.emplace_back(submat(c.cov, subset));
        out.means.push_back(subvec(c.mean, subset));
    }
    return out;
}

}  // namespace

double gmm_logpdf(const GmmSpec& spec, std::span<const double> point, std::span<const int> subset) {
    const MarginalGmm marg = marginal_gmm(spec, subset);
    return gmm_logpdf_cached(spec, marg.factors, marg.means, point);
}

std::vector<std::vector<double>> sample_class(const GmmSpec& spec, std::size_t class_index, std::size_t n,
                                              std::uint64_t seed) {
    const std::size_t d = spec.dim();
    const auto& cls = spec.classes[class_index];
    Cholesky factor(cls.cov);
    Rng rng(seed);

    std::vector<std::vector<double>> columns(d, std::vector<double>(n));
    std::vector<double> u(d), x(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < d; ++t) u[t] = rng.next_normal();
        factor.transform(u, cls.mean, x);
        for (std::size_t t = 0; t < d; ++t) columns[t][i] = x[t];
    }
    return columns;
}

double mc_mi(const GmmSpec& spec, const std::vector<int>& subset, long long n_mc, std::uint64_t seed) {
    spec.check();
    if (subset.empty()) return 0.0;
    const MarginalGmm marg = marginal_gmm(spec, subset);

    double total = 0.0;
    std::vector<double> u(subset.size()), s(subset.size());
    for (std::size_t y = 0; y < spec.classes.size(); ++y) {
        Rng rng(derive_stream(seed, {static_cast<std::uint64_t>(StreamPurpose::mc_oracle), y}));
        double acc = 0.0;
        for (long long i = 0; i < n_mc; ++i) {
            for (std::size_t t = 0; t < u.size(); ++t) u[t] = rng.next_normal();
            marg.factors[y].transform(u, marg.means[y], s);
            acc += marg.factors[y].logpdf(s, marg.means[y]) - gmm_logpdf_cached(spec, marg.factors, marg.means, s);
        }
        total += spec.classes[y].prior * (acc / static_cast<double>(n_mc));
    }
    return total;
}

double mc_cmi(const GmmSpec& spec, int x, const std::vector<int>& z, long long n_mc, std::uint64_t seed) {
    spec.check();
    if (z.empty()) return mc_mi(spec, {x}, n_mc, seed);

    std::vector<int> xz{x};
    xz.insert(xz.end(), z.begin(), z.end());
    const MarginalGmm marg_xz = marginal_gmm(spec, xz);
    const MarginalGmm marg_z = marginal_gmm(spec, z);

    double total = 0.0;
    std::vector<double> u(xz.size()), s(xz.size());
    for (std::size_t y = 0; y < spec.classes.size(); ++y) {
        Rng rng(derive_stream(seed, {static_cast<std::uint64_t>(StreamPurpose::mc_oracle), y}));
        double acc = 0.0;
        for (long long i = 0; i < n_mc; ++i) {
            for (std::size_t t = 0; t < u.size(); ++t) u[t] = rng.next_normal();
            marg_xz.factors[y].transform(u, marg_xz.means[y], s);
            const std::span<const double> zs(s.data() + 1, z.size());  // z coordinates follow x
            // log [ p(z) p(x,z|y) / ( p(x,z) p(z|y) ) ]
            acc += gmm_logpdf_cached(spec, marg_z.factors, marg_z.means, zs) +
                   marg_xz.factors[y].logpdf(s, marg_xz.means[y]) -
                   gmm_logpdf_cached(spec, marg_xz.factors, marg_xz.means, s) -
                   marg_z.factors[y].logpdf(zs, marg_z.means[y]);
        }
        total += spec.classes[y].prior * (acc / static_cast<double>(n_mc));
    }
    return total;
}

DecompositionResult oracle_decompose(const GmmSpec& spec, int x, double tol, long long n_mc, std::uint64_t seed) {
    spec.check();
    if (!(tol >= 0.0)) throw Error("tol must be nonnegative");
    const std::size_t m = spec.dim();

    const double mi = mc_cmi(spec, x, {}, n_mc, derive_stream(seed, {static_cast<std::uint64_t>(x), 0}));

    auto run_direction = [&](Direction dir) {
        GreedyResult res;
        std::vector<int> remaining;
        for (int f = 0; f < static_cast<int>(m); ++f)
            if (f != x) remaining.push_back(f);

        double current = mi;
        int iteration = 1;
        while (!remaining.empty()) {
            std::vector<double> scores(remaining.size());
            for (std::size_t c = 0; c < remaining.size(); ++c) {
                std::vector<int> zc = res.selected;
                zc.push_back(remaining[c]);
                scores[c] = mc_cmi(spec, x, zc, n_mc,
                                   derive_stream(seed, {static_cast<std::uint64_t>(x),
                                                        static_cast<std::uint64_t>(dir == Direction::min ? 1 : 2),
                                                        static_cast<std::uint64_t>(iteration),
                                                        static_cast<std::uint64_t>(remaining[c])}));
            }
            std::size_t best = 0;
            for (std::size_t c = 1; c < remaining.size(); ++c) {
                const bool better = dir == Direction::min ? scores[c] < scores[best] : scores[c] > scores[best];
                if (better) best = c;
            }
            const double delta = dir == Direction::min ? current - scores[best] : scores[best] - current;
            const bool accepted = delta > tol;

            TraceIteration record;
            for (std::size_t c = 0; c < remaining.size(); ++c)
                record.candidate_scores.emplace_back(remaining[c], scores[c]);
            record.selected = remaining[best];
            record.cmi_before = current;
            record.cmi_after = accepted ? scores[best] : current;
            record.surrogate_threshold = tol;
            record.accepted = accepted;
            res.trace.iterations.push_back(std::move(record));

            if (!accepted) break;
            current = scores[best];
            res.selected.push_back(remaining[best]);
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
            ++iteration;
        }
        return std::make_pair(res, current);
    };

    DecompositionResult r;
    r.source_index = x;
    r.mi = mi;
    r.mi_significant = mi > tol;

    // mirror the estimator's gate: no minimizing set is searched for an
    // insignificant MI, while the max search always runs
    GreedyResult min_res;
    double cmi_zmin = mi;
    if (r.mi_significant) {
        auto [res, value] = run_direction(Direction::min);
        min_res = std::move(res);
        cmi_zmin = value;
    }
    auto [max_res, cmi_zmax] = run_direction(Direction::max);

    r.cmi_zmin = cmi_zmin;
    r.cmi_zmax = cmi_zmax;
    r.unique = r.cmi_zmin;
    r.redundant = r.mi - r.cmi_zmin;
    r.synergistic = r.cmi_zmax - r.mi;
    r.zmin = std::move(min_res.selected);
    r.zmax = std::move(max_res.selected);
    r.trace_min = std::move(min_res.trace);
    r.trace_max = std::move(max_res.trace);
    return r;
}

}  // namespace infodecomp::oracle
