#ifndef DESMOOTH_RNG_HPP
#define DESMOOTH_RNG_HPP

#include <cstdint>

namespace desmooth {

/// Counter-style splittable random stream built on splitmix64.
///
/// stream(seed, r) deterministically derives an independent state for work
/// unit r, so parallel and serial replication schedules produce identical
/// draws. Within a stream, draws are sequential.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) {
        // decorrelate seed and stream index before entering the sequence
        state_ = mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform draw on the open interval (0, 1); safe as quantile input.
    double next_uniform() {
        const std::uint64_t bits = next_u64() >> 11; // top 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace desmooth

#endif // DESMOOTH_RNG_HPP
