#pragma once

#include "cpd/simd/kernels.hpp"

namespace cpd::simd::detail {

const KernelTable& scalar_table();
#if defined(CPD_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table();
#endif
#if defined(CPD_HAVE_NEON_KERNELS)
const KernelTable& neon_table();
#endif

}  // namespace cpd::simd::detail
