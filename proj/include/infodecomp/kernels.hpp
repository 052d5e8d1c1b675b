#ifndef INFODECOMP_KERNELS_HPP
#define INFODECOMP_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops of the neighbor-counting estimator: Chebyshev
// (max-norm) distance rows, strict-inequality range counting, and k-th
// neighbor selection. Every kernel has a scalar reference implementation and
// SIMD variants (AVX2, AVX-512F) selected once at runtime; all variants are
// bit-equivalent because |a-b|, max and compares are exact in IEEE double.
//
// Set INFODECOMP_ISA=scalar|avx2|avx512 to override the automatic choice.

namespace infodecomp::kernels {

// dst[j] = |col[j] - center|
void abs_diff(double* dst, const double* col, double center, std::size_t n);

// dst[j] = max(dst[j], |col[j] - center|)
void max_abs_diff(double* dst, const double* col, double center, std::size_t n);

// number of j in [0, n) with d[j] < r (strict)
std::size_t count_lt(const double* d, double r, std::size_t n);

struct QuadCounts {
    std::int64_t full = 0;  // max(dxz[j], |v[j]-vc|) < r
    std::int64_t zv = 0;    // max(dz[j],  |v[j]-vc|) < r
    std::int64_t xz = 0;    // dxz[j] < r
    std::int64_t z = 0;     // dz[j]  < r
};

// Fused count over one index range of the four subspaces used by the CMI
// pair estimator; the caller splits [0, N) into class segments and combines.
QuadCounts count4_lt(const double* dxz, const double* dz, const double* v, double vc, double r, std::size_t n);

struct PairCounts {
    std::int64_t fused = 0;  // max(base[j], |v[j]-vc|) < r
    std::int64_t base = 0;   // base[j] < r
};

// Two-predicate variant over one range.
PairCounts count2_lt(const double* base, const double* v, double vc, double r, std::size_t n);

// k-th smallest (1-based) of max(base[j], |v[j]-vc|) over j in [0, n),
// skipping j == self (pass n or larger to keep all). heap must hold k
// doubles. Requires n - (self < n) >= k.
double kth_smallest_fused(const double* base, const double* v, double vc, std::size_t n, std::size_t self, int k,
                          double* heap);

// Collect kernels behind the seeded k-th neighbor selection: every fused
// distance strictly below the threshold is written to out (capacity n) and
// the count returned. When at least k+1 fall under a guessed threshold, the
// k-th smallest among them is the global k-th.

// fused = max(|a[j]-ac|, |b[j]-bc|)
std::size_t collect_fused2_lt(const double* a, const double* b, double ac, double bc, double threshold,
                              std::size_t n, double* out);

// fused = max(|a[j]-ac|, base[j], |b[j]-bc|)
std::size_t collect_fused3_lt(const double* a, const double* base, const double* b, double ac, double bc,
                              double threshold, std::size_t n, double* out);

// number of j with |vals[j] - center| < r
std::size_t count_absdiff_lt(const double* vals, double center, double r, std::size_t n);

// plain variant: k-th smallest of d[j]
double kth_smallest(const double* d, std::size_t n, std::size_t self, int k, double* heap);

// name of the instruction set the dispatcher picked ("scalar", "avx2", "avx512")
const char* isa_name();

// Per-variant entry points, exposed so the equivalence suite can cross-check
// every implementation the host can execute.
namespace detail {

void abs_diff_scalar(double* dst, const double* col, double center, std::size_t n);
void max_abs_diff_scalar(double* dst, const double* col, double center, std::size_t n);
std::size_t count_lt_scalar(const double* d, double r, std::size_t n);
QuadCounts count4_lt_scalar(const double* dxz, const double* dz, const double* v, double vc, double r, std::size_t n);
PairCounts count2_lt_scalar(const double* base, const double* v, double vc, double r, std::size_t n);
double kth_smallest_fused_scalar(const double* base, const double* v, double vc, std::size_t n, std::size_t self,
                                 int k, double* heap);
std::size_t collect_fused2_lt_scalar(const double* a, const double* b, double ac, double bc, double threshold,
                                     std::size_t n, double* out);
std::size_t collect_fused3_lt_scalar(const double* a, const double* base, const double* b, double ac, double bc,
                                     double threshold, std::size_t n, double* out);
std::size_t count_absdiff_lt_scalar(const double* vals, double center, double r, std::size_t n);

bool have_avx2();
bool have_avx512();

#if defined(__x86_64__) || defined(__i386__)
void abs_diff_avx2(double* dst, const double* col, double center, std::size_t n);
void max_abs_diff_avx2(double* dst, const double* col, double center, std::size_t n);
std::size_t count_lt_avx2(const double* d, double r, std::size_t n);
QuadCounts count4_lt_avx2(const double* dxz, const double* dz, const double* v, double vc, double r, std::size_t n);
PairCounts count2_lt_avx2(const double* base, const double* v, double vc, double r, std::size_t n);
double kth_smallest_fused_avx2(const double* base, const double* v, double vc, std::size_t n, std::size_t self, int k,
                               double* heap);

std::size_t collect_fused2_lt_avx2(const double* a, const double* b, double ac, double bc, double threshold,
                                   std::size_t n, double* out);
std::size_t collect_fused3_lt_avx2(const double* a, const double* base, const double* b, double ac, double bc,
                                   double threshold, std::size_t n, double* out);
std::size_t count_absdiff_lt_avx2(const double* vals, double center, double r, std::size_t n);

std::size_t count_lt_avx512(const double* d, double r, std::size_t n);
QuadCounts count4_lt_avx512(const double* dxz, const double* dz, const double* v, double vc, double r, std::size_t n);
PairCounts count2_lt_avx512(const double* base, const double* v, double vc, double r, std::size_t n);
std::size_t collect_fused2_lt_avx512(const double* a, const double* b, double ac, double bc, double threshold,
                                     std::size_t n, double* out);
std::size_t collect_fused3_lt_avx512(const double* a, const double* base, const double* b, double ac, double bc,
                                     double threshold, std::size_t n, double* out);
std::size_t count_absdiff_lt_avx512(const double* vals, double center, double r, std::size_t n);
#endif

}  // namespace detail

}  // namespace infodecomp::kernels

#endif  // INFODECOMP_KERNELS_HPP
