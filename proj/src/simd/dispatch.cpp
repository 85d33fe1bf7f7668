#include <cstdlib>
#include <string>

#include "cpd/error.hpp"
#include "tables.hpp"

namespace cpd::simd {
namespace {

bool cpu_has_avx2() {
#if defined(CPD_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& select_kernels() {
    if (const char* forced = std::getenv("CPD_SIMD"); forced != nullptr && std::string(forced) == "scalar") {
        return detail::scalar_table();
    }
    if (isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
    if (isa_available(Isa::Neon)) return kernels_for(Isa::Neon);
    return detail::scalar_table();
}

}  // namespace

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
            return cpu_has_avx2();
        case Isa::Neon:
#if defined(CPD_HAVE_NEON_KERNELS)
            return true;
#else
            return false;
#endif
    }
    return false;
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
        case Isa::Neon:
            return "neon";
    }
    return "unknown";
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) {
        throw InvalidInput("kernels for " + std::string(isa_name(isa)) + " are not available");
    }
    switch (isa) {
#if defined(CPD_HAVE_AVX2_KERNELS)
        case Isa::Avx2:
            return detail::avx2_table();
#endif
#if defined(CPD_HAVE_NEON_KERNELS)
        case Isa::Neon:
            return detail::neon_table();
#endif
        default:
            return detail::scalar_table();
    }
}

const KernelTable& active_kernels() {
    static const KernelTable& table = select_kernels();
    return table;
}

}  // namespace cpd::simd
