#include <algorithm>
#include <cmath>

#include "tables.hpp"

namespace cpd::simd::detail {
namespace {

void increment_suffix(double* counts, std::size_t from, std::size_t size) {
    for (std::size_t j = from; j < size; ++j) counts[j] += 1.0;
}

double max_abs_affine(const double* left, const double* total, std::size_t size, double a,
                      double b) {
    double best = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
        best = std::max(best, std::fabs(a * left[j] - b * total[j]));
    }
    return best;
}

// Striped accumulation; see kernels.hpp for the lane contract.
template <typename Term>
double striped_sum(std::size_t size, Term term) {
    double s[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = size - size % 4;
    for (std::size_t j = 0; j < body; j += 4) {
        s[0] += term(j);
        s[1] += term(j + 1);
        s[2] += term(j + 2);
        s[3] += term(j + 3);
    }
    double acc = (s[0] + s[1]) + (s[2] + s[3]);
    for (std::size_t j = body; j < size; ++j) acc += term(j);
    return acc;
}

double sum_abs_affine(const double* left, const double* total, std::size_t size, double a,
                      double b) {
    return striped_sum(size, [&](std::size_t j) { return std::fabs(a * left[j] - b * total[j]); });
}

double sum_sq_affine(const double* left, const double* total, std::size_t size, double a,
                     double b) {
    return striped_sum(size, [&](std::size_t j) {
        const double v = a * left[j] - b * total[j];
        return v * v;
    });
}

double dot(const double* x, const double* y, std::size_t size) {
    return striped_sum(size, [&](std::size_t j) { return x[j] * y[j]; });
}

void reflect_update(const double* prev, double kappa, double* out, std::size_t size) {
    for (std::size_t j = 0; j < size; ++j) out[j] = prev[j] - kappa * prev[size - 1 - j];
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::Scalar,   increment_suffix, max_abs_affine,
                                   sum_abs_affine, sum_sq_affine,    dot,
                                   reflect_update};
    return table;
}

}  // namespace cpd::simd::detail
