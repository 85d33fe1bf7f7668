#pragma once
// Data-parallel inner loops shared by the profile scan and the Gaussian
// sampler. Every kernel has a scalar reference implementation; vector
// variants (AVX2 on x86-64, NEON on AArch64) are selected once at runtime.
//
// All variants produce bit-identical results. Reductions use four striped
// partial sums s0..s3 (element i goes to s[i % 4]) over the largest multiple
// of four, combined as (s0 + s1) + (s2 + s3), followed by a sequential tail.
// The build disables FP contraction so no variant fuses multiply-adds.

#include <cstddef>
#include <span>
#include <string_view>

namespace cpd::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
    Isa isa;
    // counts[j] += 1 for j in [from, size)
    void (*increment_suffix)(double* counts, std::size_t from, std::size_t size);
    // max_j |a * left[j] - b * total[j]|
    double (*max_abs_affine)(const double* left, const double* total, std::size_t size,
                             double a, double b);
    // sum_j |a * left[j] - b * total[j]|
    double (*sum_abs_affine)(const double* left, const double* total, std::size_t size,
                             double a, double b);
    // sum_j (a * left[j] - b * total[j])^2
    double (*sum_sq_affine)(const double* left, const double* total, std::size_t size,
                            double a, double b);
    // sum_j x[j] * y[j]
    double (*dot)(const double* x, const double* y, std::size_t size);
    // out[j] = prev[j] - kappa * prev[size - 1 - j]
    void (*reflect_update)(const double* prev, double kappa, double* out, std::size_t size);
};

bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

/// Table for a specific instruction set; throws InvalidInput if the build or
/// the running CPU lacks it.
const KernelTable& kernels_for(Isa isa);

/// Best available table. `CPD_SIMD=scalar` in the environment pins the
/// reference kernels.
const KernelTable& active_kernels();

inline void increment_suffix(std::span<double> counts, std::size_t from) {
    active_kernels().increment_suffix(counts.data(), from, counts.size());
}

inline double dot(std::span<const double> x, std::span<const double> y) {
    return active_kernels().dot(x.data(), y.data(), x.size());
}

}  // namespace cpd::simd
