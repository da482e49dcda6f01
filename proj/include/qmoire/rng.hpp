#pragma once

#include <cstdint>

namespace qmoire::rng {

/// Counter-based random stream (Philox4x32-10) keyed by (seed, stream id).
/// Streams with distinct ids are statistically independent and each stream's
/// output depends only on (seed, stream, draw index), so per-step streams give
/// results independent of evaluation order and worker count.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double();

    /// Unit-rate exponential deviate.
    double next_exponential();

    /// Poisson deviate by counting unit-rate arrivals in [0, mean).
    std::uint64_t next_poisson(double mean);

private:
    void refill();

    std::uint32_t key_[2];
    std::uint32_t stream_[2];
    std::uint64_t block_ = 0;
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int have_ = 0;  // unread 32-bit words in out_
};

}  // namespace qmoire::rng
