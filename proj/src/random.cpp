#include "cpd/random.hpp"

#include <cmath>

namespace cpd {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(const SeedSpec& seed, std::uint64_t stream_id) {
    return splitmix64(splitmix64(splitmix64(seed.master_seed) ^ seed.replication_id) ^ stream_id);
}

RandomStream::RandomStream(std::uint64_t engine_seed) : engine_(engine_seed) {}

RandomStream::RandomStream(const SeedSpec& seed, std::uint64_t stream_id)
    : RandomStream(derive_seed(seed, stream_id)) {}

double RandomStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (spare_) {
        const double value = *spare_;
        spare_.reset();
        return value;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    return u * scale;
}

}  // namespace cpd
