#include <infodecomp/estimator.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include <infodecomp/kernels.hpp>

namespace infodecomp {

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma requires x > 0");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli tail up to 1/(12 x^14); truncation error < 5e-17 for x >= 10
    const double series =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 -
                                        inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

DigammaTable::DigammaTable(std::size_t max_arg) {
    table_.resize(max_arg + 1);
    table_[0] = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i <= max_arg; ++i) table_[i] = digamma(static_cast<double>(i));
}

EstimatorContext::EstimatorContext(const ValidatedDataset& dataset, EstimatorConfig config)
    : feature_names_(dataset.data.feature_names),
      class_alphabet_(dataset.data.class_alphabet),
      config_(config) {
    config_.check();
    const Dataset* source = &dataset.data;
    StandardizeResult standardized;
    if (config_.standardize) {
        standardized = standardize(dataset.data);
        source = &standardized.data;
    }

    const std::size_t n = source->n_samples();
    const std::size_t m = source->n_features();
    const std::size_t n_classes = source->n_classes();

    for (std::size_t y = 0; y < n_classes; ++y) {
        if (dataset.class_counts[y] <= static_cast<std::size_t>(config_.k))
            throw ClassTooSmallError(class_alphabet_[y], dataset.class_counts[y], config_.k);
    }

    // stable class sort keeps the original order inside each class segment
    to_original_.resize(n);
    std::iota(to_original_.begin(), to_original_.end(), std::size_t{0});
    std::stable_sort(to_original_.begin(), to_original_.end(),
                     [&](std::size_t a, std::size_t b) { return source->labels[a] < source->labels[b]; });

    sorted_labels_.resize(n);
    class_offsets_.assign(n_classes + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sorted_labels_[i] = source->labels[to_original_[i]];
        ++class_offsets_[sorted_labels_[i] + 1];
    }
    for (std::size_t y = 0; y < n_classes; ++y) class_offsets_[y + 1] += class_offsets_[y];

    columns_.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
        columns_[c].resize(n);
        const auto& src = source->features[c];
        for (std::size_t i = 0; i < n; ++i) columns_[c][i] = src[to_original_[i]];
    }

    psi_ = DigammaTable(n);
}

namespace {

// The two specific-MI forms. Shared by the reference counting path and the
// workspace so both produce bit-identical doubles.
inline double specific_full_form(double psi_n, double psi_ny, double psi_k, double sum_psi_all, double ny) {
    return psi_n - psi_ny + psi_k - sum_psi_all / ny;
}

inline double specific_projected_form(double psi_n, double psi_ny, double sum_psi_within, double sum_psi_all,
                                      double ny) {
    return psi_n - psi_ny + sum_psi_within / ny - sum_psi_all / ny;
}

inline double weighted_total(const std::vector<double>& specific, const std::vector<double>& weight) {
    double total = 0.0;
    for (std::size_t y = 0; y < specific.size(); ++y) total += weight[y] * specific[y];
    return total;
}

std::vector<double> class_weights(const EstimatorContext& ctx) {
    std::vector<double> w(ctx.n_classes());
    const double n = static_cast<double>(ctx.n());
    for (std::size_t y = 0; y < w.size(); ++y) w[y] = static_cast<double>(ctx.class_count(y)) / n;
    return w;
}

bool same_feature_set(std::vector<int> a, std::vector<int> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

void build_row(const EstimatorContext& ctx, const std::vector<int>& dims, std::size_t i, double* row) {
    const std::size_t n = ctx.n();
    kernels::abs_diff(row, ctx.column(dims[0]), ctx.column(dims[0])[i], n);
    for (std::size_t d = 1; d < dims.size(); ++d)
        kernels::max_abs_diff(row, ctx.column(dims[d]), ctx.column(dims[d])[i], n);
}

}  // namespace

NeighborCounts compute_counts(const EstimatorContext& ctx, const std::vector<int>& search_space,
                              const std::vector<std::vector<int>>& subspaces, int k) {
    if (search_space.empty()) throw EmptySearchSpaceError();
    if (k < 1) throw Error("k must be at least 1");
    const std::size_t n = ctx.n();
    for (std::size_t y = 0; y < ctx.n_classes(); ++y) {
        if (ctx.class_count(y) <= static_cast<std::size_t>(k))
            throw ClassTooSmallError(ctx.class_alphabet()[y], ctx.class_count(y), k);
    }
    for (const auto& s : subspaces) {
        for (int f : s) {
            if (std::find(search_space.begin(), search_space.end(), f) == search_space.end())
                throw Error("subspace feature " + std::to_string(f) + " is not part of the search space");
        }
    }

    NeighborCounts out;
    out.k = k;
    out.search_space = search_space;
    out.subspaces = subspaces;
    out.radii.resize(n);
    out.counts_all.assign(subspaces.size(), std::vector<std::int64_t>(n, 0));
    out.counts_within.assign(subspaces.size(), std::vector<std::int64_t>(n, 0));

    std::vector<double> row(n);
    std::vector<double> sub_row(n);
    std::vector<double> heap(static_cast<std::size_t>(k));

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t y = static_cast<std::size_t>(ctx.label_of(i));
        const std::size_t cs = ctx.class_begin(y);
        const std::size_t ce = ctx.class_end(y);
        const std::size_t orig = ctx.to_original(i);

        build_row(ctx, search_space, i, row.data());
        const double r = kernels::kth_smallest(row.data() + cs, ce - cs, i - cs, k, heap.data());
        if (!(r > 0.0)) throw DegenerateRadiusError(orig);
        out.radii[orig] = r;

        for (std::size_t s = 0; s < subspaces.size(); ++s) {
            if (subspaces[s].empty()) {
                // distance over no coordinates is 0, strictly inside any radius
                out.counts_all[s][orig] = static_cast<std::int64_t>(n) - 1;
                out.counts_within[s][orig] = static_cast<std::int64_t>(ce - cs) - 1;
                continue;
            }
            build_row(ctx, subspaces[s], i, sub_row.data());
            const std::int64_t all = static_cast<std::int64_t>(kernels::count_lt(sub_row.data(), r, n)) - 1;
            const std::int64_t within =
                static_cast<std::int64_t>(kernels::count_lt(sub_row.data() + cs, r, ce - cs)) - 1;
            out.counts_all[s][orig] = all;
            out.counts_within[s][orig] = within;
        }
    }
    return out;
}

MiEstimate mi_class_features(const EstimatorContext& ctx, const std::vector<int>& feature_set,
                             const NeighborCounts& counts) {
    const std::size_t n_classes = ctx.n_classes();
    MiEstimate est;
    est.weight = class_weights(ctx);
    est.specific.assign(n_classes, 0.0);

    if (feature_set.empty()) {
        est.total = 0.0;  // I(Y; empty set) is 0 by definition
        return est;
    }
    if (n_classes == 1) {
        est.total = 0.0;  // a one-symbol alphabet carries no information
        return est;
    }

    std::size_t sub = counts.subspaces.size();
    for (std::size_t s = 0; s < counts.subspaces.size(); ++s) {
        if (same_feature_set(counts.subspaces[s], feature_set)) {
            sub = s;
            break;
        }
    }
    if (sub == counts.subspaces.size())
        throw SubspaceNotCountedError("requested feature set was not among the counted subspaces");

    const bool full_form = same_feature_set(feature_set, counts.search_space);
    const auto& psi = ctx.psi_table();
    const std::size_t n = ctx.n();
    const double psi_n = psi.psi(static_cast<long long>(n));

    std::vector<double> sum_all(n_classes, 0.0), sum_within(n_classes, 0.0);
    // ascending sorted index = ascending original order inside each class
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t y = static_cast<std::size_t>(ctx.label_of(i));
        const std::size_t orig = ctx.to_original(i);
        sum_all[y] += psi.psi(counts.counts_all[sub][orig] + 1);
        if (!full_form) sum_within[y] += psi.psi(counts.counts_within[sub][orig] + 1);
    }

    for (std::size_t y = 0; y < n_classes; ++y) {
        const double ny = static_cast<double>(ctx.class_count(y));
        const double psi_ny = psi.psi(static_cast<long long>(ctx.class_count(y)));
        est.specific[y] = full_form
                              ? specific_full_form(psi_n, psi_ny, psi.psi(counts.k), sum_all[y], ny)
                              : specific_projected_form(psi_n, psi_ny, sum_within[y], sum_all[y], ny);
    }
    est.total = weighted_total(est.specific, est.weight);
    return est;
}

MiEstimate mi_standalone(const EstimatorContext& ctx, int x, int k) {
    return mi_standalone_col(ctx, ctx.column(x), k);
}

MiEstimate mi_standalone_col(const EstimatorContext& ctx, const double* xcol, int k) {
    const std::size_t n = ctx.n();
    const std::size_t n_classes = ctx.n_classes();
    MiEstimate est;
    est.weight = class_weights(ctx);
    est.specific.assign(n_classes, 0.0);
    if (n_classes == 1) {
        est.total = 0.0;
        return est;
    }
    for (std::size_t y = 0; y < n_classes; ++y) {
        if (ctx.class_count(y) <= static_cast<std::size_t>(k))
            throw ClassTooSmallError(ctx.class_alphabet()[y], ctx.class_count(y), k);
    }

    // 1-D paths: the k-th same-class neighbor comes from a sorted merge
    // around each sample, the range count from binary searches on the global
    // sorted column. Both use the same fl(|a-b|) predicate as the generic
    // counting path, so results agree bit for bit.
    std::vector<double> radii(n);
    std::vector<double> sorted_vals;
    std::vector<std::size_t> order, rank;
    const double inf = std::numeric_limits<double>::infinity();

    for (std::size_t y = 0; y < n_classes; ++y) {
        const std::size_t cs = ctx.class_begin(y);
        const std::size_t ny = ctx.class_count(y);
        order.resize(ny);
        rank.resize(ny);
        sorted_vals.resize(ny);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double va = xcol[cs + a], vb = xcol[cs + b];
            return va < vb || (va == vb && a < b);
        });
        for (std::size_t t = 0; t < ny; ++t) {
            rank[order[t]] = t;
            sorted_vals[t] = xcol[cs + order[t]];
        }
        for (std::size_t a = 0; a < ny; ++a) {
            const std::size_t p = rank[a];
            const double xi = sorted_vals[p];
            std::ptrdiff_t l = static_cast<std::ptrdiff_t>(p) - 1;
            std::size_t rgt = p + 1;
            double d = 0.0;
            for (int step = 0; step < k; ++step) {
                const double dl = (l >= 0) ? std::fabs(xi - sorted_vals[static_cast<std::size_t>(l)]) : inf;
                const double dr = (rgt < ny) ? std::fabs(sorted_vals[rgt] - xi) : inf;
                if (dl <= dr) {
                    d = dl;
                    --l;
                } else {
                    d = dr;
                    ++rgt;
                }
            }
            if (!(d > 0.0)) throw DegenerateRadiusError(ctx.to_original(cs + a));
            radii[cs + a] = d;
        }
    }

    std::vector<double> global_sorted(xcol, xcol + n);
    std::sort(global_sorted.begin(), global_sorted.end());

    const auto& psi = ctx.psi_table();
    const double psi_n = psi.psi(static_cast<long long>(n));
    std::vector<double> sum_all(n_classes, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double xi = xcol[i];
        const double r = radii[i];
        const auto split = std::lower_bound(global_sorted.begin(), global_sorted.end(), xi);
        // left of the split distances shrink toward xi, right of it they grow
        const auto lo = std::partition_point(global_sorted.begin(), split,
                                             [&](double vj) { return !(std::fabs(vj - xi) < r); });
        const auto hi =
            std::partition_point(split, global_sorted.end(), [&](double vj) { return std::fabs(vj - xi) < r; });
        const std::int64_t m_x = static_cast<std::int64_t>(hi - lo) - 1;
        sum_all[static_cast<std::size_t>(ctx.label_of(i))] += psi.psi(m_x + 1);
    }

    for (std::size_t y = 0; y < n_classes; ++y) {
        const double ny = static_cast<double>(ctx.class_count(y));
        est.specific[y] = specific_full_form(psi_n, psi.psi(static_cast<long long>(ctx.class_count(y))),
                                             psi.psi(k), sum_all[y], ny);
    }
    est.total = weighted_total(est.specific, est.weight);
    return est;
}

CmiPair cmi_pair(const EstimatorContext& ctx, int x, const std::vector<int>& z, int v, int k) {
    if (v == x) throw Error("cmi_pair: candidate equals the source feature");
    if (std::find(z.begin(), z.end(), x) != z.end()) throw Error("cmi_pair: source inside the conditioning set");
    if (std::find(z.begin(), z.end(), v) != z.end()) throw Error("cmi_pair: candidate inside the conditioning set");

    std::vector<int> search{x};
    search.insert(search.end(), z.begin(), z.end());
    search.push_back(v);

    std::vector<int> zv = z;
    zv.push_back(v);
    std::vector<int> xz{x};
    xz.insert(xz.end(), z.begin(), z.end());

    const auto counts = compute_counts(ctx, search, {search, zv, xz, z}, k);
    const double t_full = mi_class_features(ctx, search, counts).total;
    const double t_zv = mi_class_features(ctx, zv, counts).total;
    const double t_xz = mi_class_features(ctx, xz, counts).total;
    const double t_z = mi_class_features(ctx, z, counts).total;
    return CmiPair{t_full - t_zv, t_xz - t_z};
}

FinalTriplet final_triplet(const EstimatorContext& ctx, int x, const std::vector<int>& zmin,
                           const std::vector<int>& zmax, int k) {
    std::vector<int> search{x};
    for (int f : zmin)
        if (std::find(search.begin(), search.end(), f) == search.end()) search.push_back(f);
    for (int f : zmax)
        if (std::find(search.begin(), search.end(), f) == search.end()) search.push_back(f);

    std::vector<int> xzmin{x}, xzmax{x};
    xzmin.insert(xzmin.end(), zmin.begin(), zmin.end());
    xzmax.insert(xzmax.end(), zmax.begin(), zmax.end());

    const auto counts = compute_counts(ctx, search, {{x}, xzmin, zmin, xzmax, zmax}, k);
    FinalTriplet t;
    t.mi = mi_class_features(ctx, {x}, counts).total;
    t.cmi_zmin = mi_class_features(ctx, xzmin, counts).total - mi_class_features(ctx, zmin, counts).total;
    t.cmi_zmax = mi_class_features(ctx, xzmax, counts).total - mi_class_features(ctx, zmax, counts).total;
    return t;
}

CmiWorkspace::CmiWorkspace(const EstimatorContext& ctx, int x, std::vector<int> z)
    : ctx_(ctx), x_(x), z_(std::move(z)) {
    const std::size_t n = ctx_.n();
    // only a conditioning set needs the n*n z-distance matrix; beyond the
    // memory budget fall back to per-row recomputation with full scans
    materialized_ = z_.empty() || n <= 2800;
    if (!materialized_) {
        zero_row_.assign(n, 0.0);
        return;
    }

    const double* xc = ctx_.column(x_);
    xorder_.resize(n);
    for (std::size_t t = 0; t < n; ++t) xorder_[t] = static_cast<std::uint32_t>(t);
    for (std::size_t y = 0; y < ctx_.n_classes(); ++y) {
        std::sort(xorder_.begin() + static_cast<std::ptrdiff_t>(ctx_.class_begin(y)),
                  xorder_.begin() + static_cast<std::ptrdiff_t>(ctx_.class_end(y)),
                  [&](std::uint32_t a, std::uint32_t b) { return xc[a] < xc[b] || (xc[a] == xc[b] && a < b); });
    }
    xs_.resize(n);
    for (std::size_t t = 0; t < n; ++t) xs_[t] = xc[xorder_[t]];

    if (!z_.empty()) {
        std::vector<std::vector<double>> zx(z_.size(), std::vector<double>(n));
        for (std::size_t d = 0; d < z_.size(); ++d) {
            const double* col = ctx_.column(z_[d]);
            for (std::size_t t = 0; t < n; ++t) zx[d][t] = col[xorder_[t]];
        }
        dzx_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            double* row = dzx_.data() + i * n;
            kernels::abs_diff(row, zx[0].data(), ctx_.column(z_[0])[i], n);
            for (std::size_t d = 1; d < z_.size(); ++d)
                kernels::max_abs_diff(row, zx[d].data(), ctx_.column(z_[d])[i], n);
        }
    }
}

CmiPair CmiWorkspace::eval_feature(int v) const { return eval_column(ctx_.column(v)); }

CmiPair CmiWorkspace::eval_column(const double* v) const {
    CmiPair out;
    eval_batch(&v, 1, &out);
    return out;
}

namespace {

// per-(column, class) running sums of psi(m+1) for the seven count families
struct BatchSums {
    BatchSums(std::size_t count, std::size_t n_classes)
        : stride(n_classes),
          full(count * n_classes, 0.0),
          zv_w(count * n_classes, 0.0),
          zv_a(count * n_classes, 0.0),
          xz_w(count * n_classes, 0.0),
          xz_a(count * n_classes, 0.0),
          z_w(count * n_classes, 0.0),
          z_a(count * n_classes, 0.0) {}

    std::size_t stride;
    std::vector<double> full, zv_w, zv_a, xz_w, xz_a, z_w, z_a;
};

void combine_batch(const EstimatorContext& ctx, bool z_empty, const BatchSums& sums, std::size_t count,
                   CmiPair* out) {
    const std::size_t n_classes = ctx.n_classes();
    const auto& psi = ctx.psi_table();
    const double psi_n = psi.psi(static_cast<long long>(ctx.n()));
    const int k = ctx.config().k;
    const auto weights = class_weights(ctx);

    std::vector<double> sp_full(n_classes), sp_zv(n_classes), sp_xz(n_classes), sp_z(n_classes);
    for (std::size_t s = 0; s < count; ++s) {
        for (std::size_t y = 0; y < n_classes; ++y) {
            const std::size_t cell = s * sums.stride + y;
            const double ny = static_cast<double>(ctx.class_count(y));
            const double psi_ny = psi.psi(static_cast<long long>(ctx.class_count(y)));
            sp_full[y] = specific_full_form(psi_n, psi_ny, psi.psi(k), sums.full[cell], ny);
            sp_zv[y] = specific_projected_form(psi_n, psi_ny, sums.zv_w[cell], sums.zv_a[cell], ny);
            sp_xz[y] = specific_projected_form(psi_n, psi_ny, sums.xz_w[cell], sums.xz_a[cell], ny);
            sp_z[y] = specific_projected_form(psi_n, psi_ny, sums.z_w[cell], sums.z_a[cell], ny);
        }
        const double t_full = weighted_total(sp_full, weights);
        const double t_zv = weighted_total(sp_zv, weights);
        const double t_xz = weighted_total(sp_xz, weights);
        const double t_z = z_empty ? 0.0 : weighted_total(sp_z, weights);
        out[s] = CmiPair{t_full - t_zv, t_xz - t_z};
    }
}

}  // namespace

void CmiWorkspace::eval_batch(const double* const* columns, std::size_t count, CmiPair* out) const {
    if (count == 0) return;
    if (ctx_.n_classes() == 1) {
        for (std::size_t s = 0; s < count; ++s) out[s] = CmiPair{0.0, 0.0};
        return;
    }
    if (materialized_) {
        eval_batch_sorted(columns, count, out);
    } else {
        eval_batch_scan(columns, count, out);
    }
}

// Materialized path. With class segments ascending in x, every candidate
// whose fixed-part distance can undercut a threshold lies in one contiguous
// window per class. The k-th neighbor radius comes from a threshold pass
// over the own-class window, seeded by the radius of the previous column for
// the same sample and widened until at least k+1 fused distances qualify, so
// seeding never changes the selected order statistic.
void CmiWorkspace::eval_batch_sorted(const double* const* columns, std::size_t count, CmiPair* out) const {
    const std::size_t n = ctx_.n();
    const std::size_t n_classes = ctx_.n_classes();
    const std::size_t uk = static_cast<std::size_t>(ctx_.config().k);
    const auto& psi = ctx_.psi_table();
    const double* xc = ctx_.column(x_);
    const double inf = std::numeric_limits<double>::infinity();

    // |xs[t] - center| < bound is monotone on each side of center
    const auto window = [&](std::size_t begin, std::size_t end, double center, double bound, std::size_t& lo,
                            std::size_t& hi) {
        const double* b = xs_.data() + begin;
        const double* e = xs_.data() + end;
        const double* split = std::lower_bound(b, e, center);
        const double* plo =
            std::partition_point(b, split, [&](double v) { return !(std::fabs(v - center) < bound); });
        const double* phi = std::partition_point(split, e, [&](double v) { return std::fabs(v - center) < bound; });
        lo = static_cast<std::size_t>(plo - xs_.data());
        hi = static_cast<std::size_t>(phi - xs_.data());
    };

    // every column rearranged into the x-sorted sample order
    std::vector<std::vector<double>> vx(count, std::vector<double>(n));
    for (std::size_t s = 0; s < count; ++s)
        for (std::size_t t = 0; t < n; ++t) vx[s][t] = columns[s][xorder_[t]];

    std::vector<double> gathered(n);
    std::vector<double> seed_radius(n, 0.0);  // 0 starts with a full-segment pass
    BatchSums sums(count, n_classes);

    // column blocks keep the active columns cache-resident while rows repeat
    constexpr std::size_t kBlock = 16;
    for (std::size_t sb = 0; sb < count; sb += kBlock) {
        const std::size_t se = std::min(count, sb + kBlock);
        for (std::size_t y = 0; y < n_classes; ++y) {
            const std::size_t cs = ctx_.class_begin(y);
            const std::size_t ce = ctx_.class_end(y);
            const std::size_t clen = ce - cs;
            for (std::size_t i = cs; i < ce; ++i) {
                const double xi = xc[i];
                const double* dzxr = z_.empty() ? nullptr : dzx_.data() + i * n;

                for (std::size_t s = sb; s < se; ++s) {
                    const double vi = columns[s][i];
                    const double* vxs = vx[s].data();

                    // k-th same-class neighbor in the fused space; the
                    // gathered set includes the query itself at distance 0,
                    // so the (k+1)-th smallest is wanted. The seed multiplier
                    // trades gather size against retry rate; high-dimensional
                    // fixed parts inflate the gathered set quickly.
                    double r = 0.0;
                    double threshold = seed_radius[i] * 1.2;
                    for (;;) {
                        std::size_t lo = cs, hi = ce;
                        if (threshold > 0.0 && std::isfinite(threshold)) {
                            window(cs, ce, xi, threshold, lo, hi);
                        } else {
                            threshold = inf;
                        }
                        const std::size_t got =
                            z_.empty()
                                ? kernels::collect_fused2_lt(xs_.data() + lo, vxs + lo, xi, vi, threshold,
                                                             hi - lo, gathered.data())
                                : kernels::collect_fused3_lt(xs_.data() + lo, dzxr + lo, vxs + lo, xi, vi,
                                                             threshold, hi - lo, gathered.data());
                        if (got > uk) {
                            std::nth_element(gathered.begin(), gathered.begin() + static_cast<std::ptrdiff_t>(uk),
                                             gathered.begin() + static_cast<std::ptrdiff_t>(got));
                            r = gathered[uk];
                            break;
                        }
                        if (threshold == inf) break;  // cannot happen: the class holds k+1 samples
                        threshold = (hi - lo == clen) ? inf : threshold * 2.0;
                    }
                    if (!(r > 0.0)) throw DegenerateRadiusError(ctx_.to_original(i));
                    seed_radius[i] = r;

                    // the fixed-part windows at the final radius, class by
                    // class: their members have |dx| < r, so the remaining
                    // factors decide the joint counts
                    std::int64_t m_full = 0, m_xz_a = 0, m_xz_w = 0;
                    for (std::size_t y2 = 0; y2 < n_classes; ++y2) {
                        std::size_t wlo, whi;
                        window(ctx_.class_begin(y2), ctx_.class_end(y2), xi, r, wlo, whi);
                        const std::size_t wlen = whi - wlo;
                        std::int64_t in_full, in_xz;
                        if (z_.empty()) {
                            in_full = static_cast<std::int64_t>(
                                kernels::count_absdiff_lt(vxs + wlo, vi, r, wlen));
                            in_xz = static_cast<std::int64_t>(wlen);
                        } else {
                            const auto pc = kernels::count2_lt(dzxr + wlo, vxs + wlo, vi, r, wlen);
                            in_full = pc.fused;
                            in_xz = pc.base;
                        }
                        m_full += in_full;
                        m_xz_a += in_xz;
                        if (y2 == y) m_xz_w = in_xz;
                    }

                    std::int64_t m_zv_a, m_zv_w, m_z_a, m_z_w;
                    if (z_.empty()) {
                        // the z u {v} subspace is just {v}
                        m_zv_a = static_cast<std::int64_t>(kernels::count_absdiff_lt(vxs, vi, r, n)) - 1;
                        m_zv_w = static_cast<std::int64_t>(kernels::count_absdiff_lt(vxs + cs, vi, r, clen)) - 1;
                        m_z_a = static_cast<std::int64_t>(n) - 1;
                        m_z_w = static_cast<std::int64_t>(clen) - 1;
                    } else {
                        const auto head = kernels::count2_lt(dzxr, vxs, vi, r, cs);
                        const auto cls = kernels::count2_lt(dzxr + cs, vxs + cs, vi, r, clen);
                        const auto tail = kernels::count2_lt(dzxr + ce, vxs + ce, vi, r, n - ce);
                        m_zv_a = head.fused + cls.fused + tail.fused - 1;
                        m_zv_w = cls.fused - 1;
                        m_z_a = head.base + cls.base + tail.base - 1;
                        m_z_w = cls.base - 1;
                    }

                    // the query sits at distance 0 from itself in every
                    // subspace, so each inclusive count is one too high
                    const std::size_t cell = s * n_classes + y;
                    sums.full[cell] += psi.psi(m_full);
                    sums.zv_w[cell] += psi.psi(m_zv_w + 1);
                    sums.zv_a[cell] += psi.psi(m_zv_a + 1);
                    sums.xz_w[cell] += psi.psi(m_xz_w);
                    sums.xz_a[cell] += psi.psi(m_xz_a);
                    sums.z_w[cell] += psi.psi(m_z_w + 1);
                    sums.z_a[cell] += psi.psi(m_z_a + 1);
                }
            }
        }
    }
    combine_batch(ctx_, z_.empty(), sums, count, out);
}

// Fallback for datasets too large to presort: rows rebuilt on the fly, full
// vector scans for every family.
void CmiWorkspace::eval_batch_scan(const double* const* columns, std::size_t count, CmiPair* out) const {
    const std::size_t n = ctx_.n();
    const std::size_t n_classes = ctx_.n_classes();
    const int k = ctx_.config().k;
    const auto& psi = ctx_.psi_table();
    const double* xc = ctx_.column(x_);

    std::vector<double> heap(static_cast<std::size_t>(k));
    std::vector<double> scratch_dxz(n), scratch_dz;
    if (!z_.empty()) scratch_dz.resize(n);
    BatchSums sums(count, n_classes);

    for (std::size_t y = 0; y < n_classes; ++y) {
        const std::size_t cs = ctx_.class_begin(y);
        const std::size_t ce = ctx_.class_end(y);
        for (std::size_t i = cs; i < ce; ++i) {
            const double* dzr;
            if (z_.empty()) {
                kernels::abs_diff(scratch_dxz.data(), xc, xc[i], n);
                dzr = zero_row_.data();
            } else {
                kernels::abs_diff(scratch_dz.data(), ctx_.column(z_[0]), ctx_.column(z_[0])[i], n);
                for (std::size_t d = 1; d < z_.size(); ++d)
                    kernels::max_abs_diff(scratch_dz.data(), ctx_.column(z_[d]), ctx_.column(z_[d])[i], n);
                std::memcpy(scratch_dxz.data(), scratch_dz.data(), n * sizeof(double));
                kernels::max_abs_diff(scratch_dxz.data(), xc, xc[i], n);
                dzr = scratch_dz.data();
            }
            const double* dxzr = scratch_dxz.data();

            for (std::size_t s = 0; s < count; ++s) {
                const double* v = columns[s];
                const double r =
                    kernels::kth_smallest_fused(dxzr + cs, v + cs, v[i], ce - cs, i - cs, k, heap.data());
                if (!(r > 0.0)) throw DegenerateRadiusError(ctx_.to_original(i));

                const auto head = kernels::count4_lt(dxzr, dzr, v, v[i], r, cs);
                const auto cls = kernels::count4_lt(dxzr + cs, dzr + cs, v + cs, v[i], r, ce - cs);
                const auto tail = kernels::count4_lt(dxzr + ce, dzr + ce, v + ce, v[i], r, n - ce);

                // every subspace distance of the query to itself is 0 < r
                const std::size_t cell = s * n_classes + y;
                sums.full[cell] += psi.psi(head.full + cls.full + tail.full);
                sums.zv_w[cell] += psi.psi(cls.zv);
                sums.zv_a[cell] += psi.psi(head.zv + cls.zv + tail.zv);
                sums.xz_w[cell] += psi.psi(cls.xz);
                sums.xz_a[cell] += psi.psi(head.xz + cls.xz + tail.xz);
                sums.z_w[cell] += psi.psi(cls.z);
                sums.z_a[cell] += psi.psi(head.z + cls.z + tail.z);
            }
        }
    }
    combine_batch(ctx_, z_.empty(), sums, count, out);
}

}  // namespace infodecomp
