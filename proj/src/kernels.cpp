#include <infodecomp/kernels.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define INFODECOMP_X86 1
#endif

namespace infodecomp::kernels {

namespace detail {

void abs_diff_scalar(double* dst, const double* col, double center, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) dst[j] = std::fabs(col[j] - center);
}

void max_abs_diff_scalar(double* dst, const double* col, double center, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) dst[j] = std::max(dst[j], std::fabs(col[j] - center));
}

std::size_t count_lt_scalar(const double* d, double r, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) c += (d[j] < r);
    return c;
}

QuadCounts count4_lt_scalar(const double* dxz, const double* dz, const double* v, double vc, double r,
                            std::size_t n) {
    QuadCounts out;
    for (std::size_t j = 0; j < n; ++j) {
        const double dv = std::fabs(v[j] - vc);
        out.full += (std::max(dxz[j], dv) < r);
        out.zv += (std::max(dz[j], dv) < r);
        out.xz += (dxz[j] < r);
        out.z += (dz[j] < r);
    }
    return out;
}

PairCounts count2_lt_scalar(const double* base, const double* v, double vc, double r, std::size_t n) {
    PairCounts out;
    for (std::size_t j = 0; j < n; ++j) {
        const double dv = std::fabs(v[j] - vc);
        out.fused += (std::max(base[j], dv) < r);
        out.base += (base[j] < r);
    }
    return out;
}

std::size_t collect_fused2_lt_scalar(const double* a, const double* b, double ac, double bc, double threshold,
                                     std::size_t n, double* out) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::max(std::fabs(a[j] - ac), std::fabs(b[j] - bc));
        if (d < threshold) out[c++] = d;
    }
    return c;
}

std::size_t collect_fused3_lt_scalar(const double* a, const double* base, const double* b, double ac, double bc,
                                     double threshold, std::size_t n, double* out) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::max(std::fabs(a[j] - ac), std::max(base[j], std::fabs(b[j] - bc)));
        if (d < threshold) out[c++] = d;
    }
    return c;
}

std::size_t count_absdiff_lt_scalar(const double* vals, double center, double r, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) c += (std::fabs(vals[j] - center) < r);
    return c;
}

namespace {

// flat max-heap of the k smallest values seen so far; root = current k-th
inline void sift_down(double* heap, int k) {
    int i = 0;
    const double val = heap[0];
    for (;;) {
        int child = 2 * i + 1;
        if (child >= k) break;
        if (child + 1 < k && heap[child + 1] > heap[child]) ++child;
        if (heap[child] <= val) break;
        heap[i] = heap[child];
        i = child;
    }
    heap[i] = val;
}

}  // namespace

double kth_smallest_fused_scalar(const double* base, const double* v, double vc, std::size_t n, std::size_t self,
                                 int k, double* heap) {
    int filled = 0;
    std::size_t j = 0;
    for (; j < n && filled < k; ++j) {
        if (j == self) continue;
        heap[filled++] = std::max(base[j], std::fabs(v[j] - vc));
    }
    std::make_heap(heap, heap + k);
    for (; j < n; ++j) {
        if (j == self) continue;
        const double d = std::max(base[j], std::fabs(v[j] - vc));
        if (d < heap[0]) {
            heap[0] = d;
            sift_down(heap, k);
        }
    }
    return heap[0];
}

#ifdef INFODECOMP_X86

bool have_avx2() { return __builtin_cpu_supports("avx2") != 0; }
bool have_avx512() { return __builtin_cpu_supports("avx512f") != 0; }

__attribute__((target("avx2"))) void abs_diff_avx2(double* dst, const double* col, double center, std::size_t n) {
    const __m256d c = _mm256_set1_pd(center);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d x = _mm256_loadu_pd(col + j);
        _mm256_storeu_pd(dst + j, _mm256_and_pd(absmask, _mm256_sub_pd(x, c)));
    }
    for (; j < n; ++j) dst[j] = std::fabs(col[j] - center);
}

__attribute__((target("avx2"))) void max_abs_diff_avx2(double* dst, const double* col, double center,
                                                       std::size_t n) {
    const __m256d c = _mm256_set1_pd(center);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d x = _mm256_loadu_pd(col + j);
        const __m256d d = _mm256_and_pd(absmask, _mm256_sub_pd(x, c));
        _mm256_storeu_pd(dst + j, _mm256_max_pd(_mm256_loadu_pd(dst + j), d));
    }
    for (; j < n; ++j) dst[j] = std::max(dst[j], std::fabs(col[j] - center));
}

__attribute__((target("avx2"))) std::size_t count_lt_avx2(const double* d, double r, std::size_t n) {
    const __m256d rv = _mm256_set1_pd(r);
    __m256i acc = _mm256_setzero_si256();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d lt = _mm256_cmp_pd(_mm256_loadu_pd(d + j), rv, _CMP_LT_OQ);
        acc = _mm256_sub_epi64(acc, _mm256_castpd_si256(lt));  // true lanes are -1
    }
    alignas(32) std::int64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::size_t c = static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
    for (; j < n; ++j) c += (d[j] < r);
    return c;
}

__attribute__((target("avx2"))) QuadCounts count4_lt_avx2(const double* dxz, const double* dz, const double* v,
                                                          double vc, double r, std::size_t n) {
    const __m256d rv = _mm256_set1_pd(r);
    const __m256d vcv = _mm256_set1_pd(vc);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256i acc_full = _mm256_setzero_si256();
    __m256i acc_zv = _mm256_setzero_si256();
    __m256i acc_xz = _mm256_setzero_si256();
    __m256i acc_z = _mm256_setzero_si256();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d a = _mm256_loadu_pd(dxz + j);
        const __m256d b = _mm256_loadu_pd(dz + j);
        const __m256d dv = _mm256_and_pd(absmask, _mm256_sub_pd(_mm256_loadu_pd(v + j), vcv));
        acc_full = _mm256_sub_epi64(acc_full, _mm256_castpd_si256(_mm256_cmp_pd(_mm256_max_pd(a, dv), rv, _CMP_LT_OQ)));
        acc_zv = _mm256_sub_epi64(acc_zv, _mm256_castpd_si256(_mm256_cmp_pd(_mm256_max_pd(b, dv), rv, _CMP_LT_OQ)));
        acc_xz = _mm256_sub_epi64(acc_xz, _mm256_castpd_si256(_mm256_cmp_pd(a, rv, _CMP_LT_OQ)));
        acc_z = _mm256_sub_epi64(acc_z, _mm256_castpd_si256(_mm256_cmp_pd(b, rv, _CMP_LT_OQ)));
    }
    alignas(32) std::int64_t lanes[16];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes + 0), acc_full);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes + 4), acc_zv);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes + 8), acc_xz);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes + 12), acc_z);
    QuadCounts out;
    out.full = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    out.zv = lanes[4] + lanes[5] + lanes[6] + lanes[7];
    out.xz = lanes[8] + lanes[9] + lanes[10] + lanes[11];
    out.z = lanes[12] + lanes[13] + lanes[14] + lanes[15];
    for (; j < n; ++j) {
        const double dv = std::fabs(v[j] - vc);
        out.full += (std::max(dxz[j], dv) < r);
        out.zv += (std::max(dz[j], dv) < r);
        out.xz += (dxz[j] < r);
        out.z += (dz[j] < r);
    }
    return out;
}

__attribute__((target("avx2"))) PairCounts count2_lt_avx2(const double* base, const double* v, double vc, double r,
                                                          std::size_t n) {
    const __m256d rv = _mm256_set1_pd(r);
    const __m256d vcv = _mm256_set1_pd(vc);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256i acc_fused = _mm256_setzero_si256();
    __m256i acc_base = _mm256_setzero_si256();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d a = _mm256_loadu_pd(base + j);
        const __m256d dv = _mm256_and_pd(absmask, _mm256_sub_pd(_mm256_loadu_pd(v + j), vcv));
        acc_fused =
            _mm256_sub_epi64(acc_fused, _mm256_castpd_si256(_mm256_cmp_pd(_mm256_max_pd(a, dv), rv, _CMP_LT_OQ)));
        acc_base = _mm256_sub_epi64(acc_base, _mm256_castpd_si256(_mm256_cmp_pd(a, rv, _CMP_LT_OQ)));
    }
    alignas(32) std::int64_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes + 0), acc_fused);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes + 4), acc_base);
    PairCounts out;
    out.fused = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    out.base = lanes[4] + lanes[5] + lanes[6] + lanes[7];
    for (; j < n; ++j) {
        const double dv = std::fabs(v[j] - vc);
        out.fused += (std::max(base[j], dv) < r);
        out.base += (base[j] < r);
    }
    return out;
}

__attribute__((target("avx2"))) std::size_t collect_fused2_lt_avx2(const double* a, const double* b, double ac,
                                                                   double bc, double threshold, std::size_t n,
                                                                   double* out) {
    const __m256d tv = _mm256_set1_pd(threshold);
    const __m256d acv = _mm256_set1_pd(ac);
    const __m256d bcv = _mm256_set1_pd(bc);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t c = 0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d da = _mm256_and_pd(absmask, _mm256_sub_pd(_mm256_loadu_pd(a + j), acv));
        const __m256d db = _mm256_and_pd(absmask, _mm256_sub_pd(_mm256_loadu_pd(b + j), bcv));
        const __m256d d = _mm256_max_pd(da, db);
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(d, tv, _CMP_LT_OQ));
        if (!mask) continue;
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, d);
        while (mask) {
            const int lane = __builtin_ctz(mask);
            mask &= mask - 1;
            out[c++] = lanes[lane];
        }
    }
    for (; j < n; ++j) {
        const double d = std::max(std::fabs(a[j] - ac), std::fabs(b[j] - bc));
        if (d < threshold) out[c++] = d;
    }
    return c;
}

__attribute__((target("avx2"))) std::size_t collect_fused3_lt_avx2(const double* a, const double* base,
                                                                   const double* b, double ac, double bc,
                                                                   double threshold, std::size_t n, double* out) {
    const __m256d tv = _mm256_set1_pd(threshold);
    const __m256d acv = _mm256_set1_pd(ac);
    const __m256d bcv = _mm256_set1_pd(bc);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t c = 0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d da = _mm256_and_pd(absmask, _mm256_sub_pd(_mm256_loadu_pd(a + j), acv));
        const __m256d db = _mm256_and_pd(absmask, _mm256_sub_pd(_mm256_loadu_pd(b + j), bcv));
        const __m256d d = _mm256_max_pd(_mm256_max_pd(da, _mm256_loadu_pd(base + j)), db);
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(d, tv, _CMP_LT_OQ));
        if (!mask) continue;
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, d);
        while (mask) {
            const int lane = __builtin_ctz(mask);
            mask &= mask - 1;
            out[c++] = lanes[lane];
        }
    }
    for (; j < n; ++j) {
        const double d = std::max(std::fabs(a[j] - ac), std::max(base[j], std::fabs(b[j] - bc)));
        if (d < threshold) out[c++] = d;
    }
    return c;
}

__attribute__((target("avx2"))) std::size_t count_absdiff_lt_avx2(const double* vals, double center, double r,
                                                                  std::size_t n) {
    const __m256d rv = _mm256_set1_pd(r);
    const __m256d cv = _mm256_set1_pd(center);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256i acc = _mm256_setzero_si256();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d d = _mm256_and_pd(absmask, _mm256_sub_pd(_mm256_loadu_pd(vals + j), cv));
        acc = _mm256_sub_epi64(acc, _mm256_castpd_si256(_mm256_cmp_pd(d, rv, _CMP_LT_OQ)));
    }
    alignas(32) std::int64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::size_t c = static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
    for (; j < n; ++j) c += (std::fabs(vals[j] - center) < r);
    return c;
}

// SIMD prefilter: blocks whose fused distances all sit at or above the heap
// root cannot change the k smallest, so they are skipped wholesale.
__attribute__((target("avx2"))) double kth_smallest_fused_avx2(const double* base, const double* v, double vc,
                                                               std::size_t n, std::size_t self, int k,
                                                               double* heap) {
    int filled = 0;
    std::size_t j = 0;
    for (; j < n && filled < k; ++j) {
        if (j == self) continue;
        heap[filled++] = std::max(base[j], std::fabs(v[j] - vc));
    }
    std::make_heap(heap, heap + k);

    const __m256d vcv = _mm256_set1_pd(vc);
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    for (; j + 4 <= n; j += 4) {
        const __m256d dv = _mm256_and_pd(absmask, _mm256_sub_pd(_mm256_loadu_pd(v + j), vcv));
        const __m256d d = _mm256_max_pd(_mm256_loadu_pd(base + j), dv);
        const __m256d lt = _mm256_cmp_pd(d, _mm256_set1_pd(heap[0]), _CMP_LT_OQ);
        int mask = _mm256_movemask_pd(lt);
        if (j <= self && self < j + 4) mask &= ~(1 << (self - j));
        while (mask) {
            const int lane = __builtin_ctz(mask);
            mask &= mask - 1;
            alignas(32) double lanes[4];
            _mm256_store_pd(lanes, d);
            if (lanes[lane] < heap[0]) {
                heap[0] = lanes[lane];
                sift_down(heap, k);
            }
        }
    }
    for (; j < n; ++j) {
        if (j == self) continue;
        const double d = std::max(base[j], std::fabs(v[j] - vc));
        if (d < heap[0]) {
            heap[0] = d;
            sift_down(heap, k);
        }
    }
    return heap[0];
}

__attribute__((target("avx512f,popcnt"))) std::size_t count_lt_avx512(const double* d, double r, std::size_t n) {
    const __m512d rv = _mm512_set1_pd(r);
    std::size_t c = 0;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __mmask8 lt = _mm512_cmp_pd_mask(_mm512_loadu_pd(d + j), rv, _CMP_LT_OQ);
        c += static_cast<std::size_t>(_mm_popcnt_u32(lt));
    }
    for (; j < n; ++j) c += (d[j] < r);
    return c;
}

__attribute__((target("avx512f,popcnt"))) PairCounts count2_lt_avx512(const double* base, const double* v,
                                                                      double vc, double r, std::size_t n) {
    const __m512d rv = _mm512_set1_pd(r);
    const __m512d vcv = _mm512_set1_pd(vc);
    PairCounts out;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __m512d a = _mm512_loadu_pd(base + j);
        const __m512d dv = _mm512_abs_pd(_mm512_sub_pd(_mm512_loadu_pd(v + j), vcv));
        out.fused += _mm_popcnt_u32(_mm512_cmp_pd_mask(_mm512_max_pd(a, dv), rv, _CMP_LT_OQ));
        out.base += _mm_popcnt_u32(_mm512_cmp_pd_mask(a, rv, _CMP_LT_OQ));
    }
    for (; j < n; ++j) {
        const double dv = std::fabs(v[j] - vc);
        out.fused += (std::max(base[j], dv) < r);
        out.base += (base[j] < r);
    }
    return out;
}

__attribute__((target("avx512f,popcnt"))) std::size_t collect_fused2_lt_avx512(const double* a, const double* b,
                                                                               double ac, double bc,
                                                                               double threshold, std::size_t n,
                                                                               double* out) {
    const __m512d tv = _mm512_set1_pd(threshold);
    const __m512d acv = _mm512_set1_pd(ac);
    const __m512d bcv = _mm512_set1_pd(bc);
    std::size_t c = 0;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __m512d da = _mm512_abs_pd(_mm512_sub_pd(_mm512_loadu_pd(a + j), acv));
        const __m512d db = _mm512_abs_pd(_mm512_sub_pd(_mm512_loadu_pd(b + j), bcv));
        const __m512d d = _mm512_max_pd(da, db);
        const __mmask8 lt = _mm512_cmp_pd_mask(d, tv, _CMP_LT_OQ);
        _mm512_mask_compressstoreu_pd(out + c, lt, d);
        c += static_cast<std::size_t>(_mm_popcnt_u32(lt));
    }
    for (; j < n; ++j) {
        const double d = std::max(std::fabs(a[j] - ac), std::fabs(b[j] - bc));
        if (d < threshold) out[c++] = d;
    }
    return c;
}

__attribute__((target("avx512f,popcnt"))) std::size_t collect_fused3_lt_avx512(const double* a, const double* base,
                                                                               const double* b, double ac, double bc,
                                                                               double threshold, std::size_t n,
                                                                               double* out) {
    const __m512d tv = _mm512_set1_pd(threshold);
    const __m512d acv = _mm512_set1_pd(ac);
    const __m512d bcv = _mm512_set1_pd(bc);
    std::size_t c = 0;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __m512d da = _mm512_abs_pd(_mm512_sub_pd(_mm512_loadu_pd(a + j), acv));
        const __m512d db = _mm512_abs_pd(_mm512_sub_pd(_mm512_loadu_pd(b + j), bcv));
        const __m512d d = _mm512_max_pd(_mm512_max_pd(da, _mm512_loadu_pd(base + j)), db);
        const __mmask8 lt = _mm512_cmp_pd_mask(d, tv, _CMP_LT_OQ);
        _mm512_mask_compressstoreu_pd(out + c, lt, d);
        c += static_cast<std::size_t>(_mm_popcnt_u32(lt));
    }
    for (; j < n; ++j) {
        const double d = std::max(std::fabs(a[j] - ac), std::max(base[j], std::fabs(b[j] - bc)));
        if (d < threshold) out[c++] = d;
    }
    return c;
}

__attribute__((target("avx512f,popcnt"))) std::size_t count_absdiff_lt_avx512(const double* vals, double center,
                                                                              double r, std::size_t n) {
    const __m512d rv = _mm512_set1_pd(r);
    const __m512d cv = _mm512_set1_pd(center);
    std::size_t c = 0;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __m512d d = _mm512_abs_pd(_mm512_sub_pd(_mm512_loadu_pd(vals + j), cv));
        c += static_cast<std::size_t>(_mm_popcnt_u32(_mm512_cmp_pd_mask(d, rv, _CMP_LT_OQ)));
    }
    for (; j < n; ++j) c += (std::fabs(vals[j] - center) < r);
    return c;
}

__attribute__((target("avx512f,popcnt"))) QuadCounts count4_lt_avx512(const double* dxz, const double* dz,
                                                                      const double* v, double vc, double r,
                                                                      std::size_t n) {
    const __m512d rv = _mm512_set1_pd(r);
    const __m512d vcv = _mm512_set1_pd(vc);
    QuadCounts out;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __m512d a = _mm512_loadu_pd(dxz + j);
        const __m512d b = _mm512_loadu_pd(dz + j);
        const __m512d dv = _mm512_abs_pd(_mm512_sub_pd(_mm512_loadu_pd(v + j), vcv));
        out.full += _mm_popcnt_u32(_mm512_cmp_pd_mask(_mm512_max_pd(a, dv), rv, _CMP_LT_OQ));
        out.zv += _mm_popcnt_u32(_mm512_cmp_pd_mask(_mm512_max_pd(b, dv), rv, _CMP_LT_OQ));
        out.xz += _mm_popcnt_u32(_mm512_cmp_pd_mask(a, rv, _CMP_LT_OQ));
        out.z += _mm_popcnt_u32(_mm512_cmp_pd_mask(b, rv, _CMP_LT_OQ));
    }
    for (; j < n; ++j) {
        const double dv = std::fabs(v[j] - vc);
        out.full += (std::max(dxz[j], dv) < r);
        out.zv += (std::max(dz[j], dv) < r);
        out.xz += (dxz[j] < r);
        out.z += (dz[j] < r);
    }
    return out;
}

#else

bool have_avx2() { return false; }
bool have_avx512() { return false; }

#endif  // INFODECOMP_X86

}  // namespace detail

namespace {

struct Dispatch {
    void (*abs_diff)(double*, const double*, double, std::size_t);
    void (*max_abs_diff)(double*, const double*, double, std::size_t);
    std::size_t (*count_lt)(const double*, double, std::size_t);
    QuadCounts (*count4_lt)(const double*, const double*, const double*, double, double, std::size_t);
    PairCounts (*count2_lt)(const double*, const double*, double, double, std::size_t);
    double (*kth_smallest_fused)(const double*, const double*, double, std::size_t, std::size_t, int, double*);
    std::size_t (*collect_fused2_lt)(const double*, const double*, double, double, double, std::size_t, double*);
    std::size_t (*collect_fused3_lt)(const double*, const double*, const double*, double, double, double,
                                     std::size_t, double*);
    std::size_t (*count_absdiff_lt)(const double*, double, double, std::size_t);
    const char* name;
};

Dispatch select() {
    using namespace detail;
    Dispatch scalar{abs_diff_scalar,          max_abs_diff_scalar,
                    count_lt_scalar,          count4_lt_scalar,
                    count2_lt_scalar,         kth_smallest_fused_scalar,
                    collect_fused2_lt_scalar, collect_fused3_lt_scalar,
                    count_absdiff_lt_scalar,  "scalar"};
    const char* force = std::getenv("INFODECOMP_ISA");
    const std::string want = force ? force : "";
    if (want == "scalar") return scalar;
#ifdef INFODECOMP_X86
    Dispatch avx2{abs_diff_avx2,          max_abs_diff_avx2,
                  count_lt_avx2,          count4_lt_avx2,
                  count2_lt_avx2,         kth_smallest_fused_avx2,
                  collect_fused2_lt_avx2, collect_fused3_lt_avx2,
                  count_absdiff_lt_avx2,  "avx2"};
    // AVX-512 upgrades only the counting loops; the rest stays on AVX2
    Dispatch avx512{abs_diff_avx2,            max_abs_diff_avx2,
                    count_lt_avx512,          count4_lt_avx512,
                    count2_lt_avx512,         kth_smallest_fused_avx2,
                    collect_fused2_lt_avx512, collect_fused3_lt_avx512,
                    count_absdiff_lt_avx512,  "avx512"};
    if (want == "avx2") {
        if (have_avx2()) return avx2;
        return scalar;
    }
    if (want == "avx512") {
        if (have_avx512() && have_avx2()) return avx512;
        return scalar;
    }
    if (have_avx512() && have_avx2()) return avx512;
    if (have_avx2()) return avx2;
#endif
    return scalar;
}

const Dispatch& dispatch() {
    static const Dispatch d = select();
    return d;
}

}  // namespace

void abs_diff(double* dst, const double* col, double center, std::size_t n) {
    dispatch().abs_diff(dst, col, center, n);
}

void max_abs_diff(double* dst, const double* col, double center, std::size_t n) {
    dispatch().max_abs_diff(dst, col, center, n);
}

std::size_t count_lt(const double* d, double r, std::size_t n) { return dispatch().count_lt(d, r, n); }

QuadCounts count4_lt(const double* dxz, const double* dz, const double* v, double vc, double r, std::size_t n) {
    return dispatch().count4_lt(dxz, dz, v, vc, r, n);
}

PairCounts count2_lt(const double* base, const double* v, double vc, double r, std::size_t n) {
    return dispatch().count2_lt(base, v, vc, r, n);
}

std::size_t collect_fused2_lt(const double* a, const double* b, double ac, double bc, double threshold,
                              std::size_t n, double* out) {
    return dispatch().collect_fused2_lt(a, b, ac, bc, threshold, n, out);
}

std::size_t collect_fused3_lt(const double* a, const double* base, const double* b, double ac, double bc,
                              double threshold, std::size_t n, double* out) {
    return dispatch().collect_fused3_lt(a, base, b, ac, bc, threshold, n, out);
}

std::size_t count_absdiff_lt(const double* vals, double center, double r, std::size_t n) {
    return dispatch().count_absdiff_lt(vals, center, r, n);
}

double kth_smallest_fused(const double* base, const double* v, double vc, std::size_t n, std::size_t self, int k,
                          double* heap) {
    return dispatch().kth_smallest_fused(base, v, vc, n, self, k, heap);
}

double kth_smallest(const double* d, std::size_t n, std::size_t self, int k, double* heap) {
    // selection is not a hot loop on its own; reuse the fused kernel with a
    // zero v column trick is not possible without a buffer, so keep it plain
    int filled = 0;
    std::size_t j = 0;
    for (; j < n && filled < k; ++j) {
        if (j == self) continue;
        heap[filled++] = d[j];
    }
    std::make_heap(heap, heap + k);
    for (; j < n; ++j) {
        if (j == self) continue;
        if (d[j] < heap[0]) {
            heap[0] = d[j];
            detail::sift_down(heap, k);
        }
    }
    return heap[0];
}

const char* isa_name() { return dispatch().name; }

}  // namespace infodecomp::kernels
