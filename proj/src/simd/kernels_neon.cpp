// NEON variants for AArch64. Two float64x2 accumulators hold lanes (s0, s1)
// and (s2, s3) so the reduction order matches the scalar reference.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "tables.hpp"

namespace cpd::simd::detail {
namespace {

inline double combine_lanes(float64x2_t lo, float64x2_t hi) {
    return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
           (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

inline float64x2_t affine(const double* left, const double* total, std::size_t j, float64x2_t a,
                          float64x2_t b) {
    return vsubq_f64(vmulq_f64(a, vld1q_f64(left + j)), vmulq_f64(b, vld1q_f64(total + j)));
}

void increment_suffix(double* counts, std::size_t from, std::size_t size) {
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t j = from;
    for (; j + 2 <= size; j += 2) vst1q_f64(counts + j, vaddq_f64(vld1q_f64(counts + j), one));
    for (; j < size; ++j) counts[j] += 1.0;
}

double max_abs_affine(const double* left, const double* total, std::size_t size, double a,
                      double b) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    float64x2_t best = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= size; j += 2) best = vmaxq_f64(best, vabsq_f64(affine(left, total, j, va, vb)));
    double result = std::max(vgetq_lane_f64(best, 0), vgetq_lane_f64(best, 1));
    for (; j < size; ++j) result = std::max(result, std::fabs(a * left[j] - b * total[j]));
    return result;
}

double sum_abs_affine(const double* left, const double* total, std::size_t size, double a,
                      double b) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 4 <= size; j += 4) {
        lo = vaddq_f64(lo, vabsq_f64(affine(left, total, j, va, vb)));
        hi = vaddq_f64(hi, vabsq_f64(affine(left, total, j + 2, va, vb)));
    }
    double result = combine_lanes(lo, hi);
    for (; j < size; ++j) result += std::fabs(a * left[j] - b * total[j]);
    return result;
}

double sum_sq_affine(const double* left, const double* total, std::size_t size, double a,
                     double b) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 4 <= size; j += 4) {
        const float64x2_t v0 = affine(left, total, j, va, vb);
        const float64x2_t v1 = affine(left, total, j + 2, va, vb);
        lo = vaddq_f64(lo, vmulq_f64(v0, v0));
        hi = vaddq_f64(hi, vmulq_f64(v1, v1));
    }
    double result = combine_lanes(lo, hi);
    for (; j < size; ++j) {
        const double v = a * left[j] - b * total[j];
        result += v * v;
    }
    return result;
}

double dot(const double* x, const double* y, std::size_t size) {
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 4 <= size; j += 4) {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(x + j), vld1q_f64(y + j)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(x + j + 2), vld1q_f64(y + j + 2)));
    }
    double result = combine_lanes(lo, hi);
    for (; j < size; ++j) result += x[j] * y[j];
    return result;
}

void reflect_update(const double* prev, double kappa, double* out, std::size_t size) {
    const float64x2_t vk = vdupq_n_f64(kappa);
    std::size_t j = 0;
    for (; j + 2 <= size; j += 2) {
        const float64x2_t mirrored = vextq_f64(vld1q_f64(prev + size - 2 - j),
                                               vld1q_f64(prev + size - 2 - j), 1);
        vst1q_f64(out + j, vsubq_f64(vld1q_f64(prev + j), vmulq_f64(vk, mirrored)));
    }
    for (; j < size; ++j) out[j] = prev[j] - kappa * prev[size - 1 - j];
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable table{Isa::Neon,     increment_suffix, max_abs_affine,
                                   sum_abs_affine, sum_sq_affine,    dot,
                                   reflect_update};
    return table;
}

}  // namespace cpd::simd::detail
