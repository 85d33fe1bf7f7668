// AVX2 variants. Compiled with -mavx2 only (no FMA) so every lane performs
// the same multiply-then-add sequence as the scalar reference.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "tables.hpp"

namespace cpd::simd::detail {
namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// (s0 + s1) + (s2 + s3)
inline double combine_lanes(__m256d acc) {
    const __m128d pairs = _mm_hadd_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    return _mm_cvtsd_f64(pairs) + _mm_cvtsd_f64(_mm_unpackhi_pd(pairs, pairs));
}

void increment_suffix(double* counts, std::size_t from, std::size_t size) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t j = from;
    for (; j + 4 <= size; j += 4) {
        _mm256_storeu_pd(counts + j, _mm256_add_pd(_mm256_loadu_pd(counts + j), one));
    }
    for (; j < size; ++j) counts[j] += 1.0;
}

inline __m256d affine(const double* left, const double* total, std::size_t j, __m256d a,
                      __m256d b) {
    return _mm256_sub_pd(_mm256_mul_pd(a, _mm256_loadu_pd(left + j)),
                         _mm256_mul_pd(b, _mm256_loadu_pd(total + j)));
}

double max_abs_affine(const double* left, const double* total, std::size_t size, double a,
                      double b) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    __m256d best = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= size; j += 4) best = _mm256_max_pd(best, abs_pd(affine(left, total, j, va, vb)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double result = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; j < size; ++j) result = std::max(result, std::fabs(a * left[j] - b * total[j]));
    return result;
}

double sum_abs_affine(const double* left, const double* total, std::size_t size, double a,
                      double b) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= size; j += 4) acc = _mm256_add_pd(acc, abs_pd(affine(left, total, j, va, vb)));
    double result = combine_lanes(acc);
    for (; j < size; ++j) result += std::fabs(a * left[j] - b * total[j]);
    return result;
}

double sum_sq_affine(const double* left, const double* total, std::size_t size, double a,
                     double b) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= size; j += 4) {
        const __m256d v = affine(left, total, j, va, vb);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double result = combine_lanes(acc);
    for (; j < size; ++j) {
        const double v = a * left[j] - b * total[j];
        result += v * v;
    }
    return result;
}

double dot(const double* x, const double* y, std::size_t size) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= size; j += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(y + j)));
    }
    double result = combine_lanes(acc);
    for (; j < size; ++j) result += x[j] * y[j];
    return result;
}

void reflect_update(const double* prev, double kappa, double* out, std::size_t size) {
    const __m256d vk = _mm256_set1_pd(kappa);
    std::size_t j = 0;
    for (; j + 4 <= size; j += 4) {
        const __m256d mirrored =
            _mm256_permute4x64_pd(_mm256_loadu_pd(prev + size - 4 - j), 0x1B);
        _mm256_storeu_pd(out + j,
                         _mm256_sub_pd(_mm256_loadu_pd(prev + j), _mm256_mul_pd(vk, mirrored)));
    }
    for (; j < size; ++j) out[j] = prev[j] - kappa * prev[size - 1 - j];
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{Isa::Avx2,     increment_suffix, max_abs_affine,
                                   sum_abs_affine, sum_sq_affine,    dot,
                                   reflect_update};
    return table;
}

}  // namespace cpd::simd::detail
