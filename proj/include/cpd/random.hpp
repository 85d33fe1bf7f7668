#pragma once
// Reproducible random streams.
//
// A stream is fixed by (master seed, replication id, stream id). The 64-bit
// engine seed is derived with SplitMix64 finalisation:
//   s = mix(mix(mix(master) ^ replication) ^ stream)
// and feeds a std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniforms take the top 53 bits; normals use the Marsaglia polar
// method (pairs, second value cached). Neither std::uniform_real_distribution
// nor std::normal_distribution is used because their algorithms are
// implementation defined.

#include <cstdint>
#include <optional>
#include <random>

namespace cpd {

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t replication_id = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(const SeedSpec& seed, std::uint64_t stream_id);

class RandomStream {
public:
    explicit RandomStream(std::uint64_t engine_seed);
    RandomStream(const SeedSpec& seed, std::uint64_t stream_id);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal.
    double normal();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace cpd
