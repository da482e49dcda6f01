#include "qmoire/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace qmoire::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream_id) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    stream_[0] = static_cast<std::uint32_t>(stream_id);
    stream_[1] = static_cast<std::uint32_t>(stream_id >> 32);
}

void CounterStream::refill() {
    std::uint32_t c[4] = {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          stream_[0], stream_[1]};
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mul_hilo(kPhiloxM0, c[0], hi0, lo0);
        mul_hilo(kPhiloxM1, c[2], hi1, lo1);
        std::uint32_t n0 = hi1 ^ c[1] ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c[3] ^ k1;
        std::uint32_t n3 = lo0;
        c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    out_[0] = c[0]; out_[1] = c[1]; out_[2] = c[2]; out_[3] = c[3];
    have_ = 4;
    ++block_;
}

std::uint64_t CounterStream::next_u64() {
    if (have_ < 2) refill();
    std::uint64_t lo = out_[4 - have_];
    std::uint64_t hi = out_[4 - have_ + 1];
    have_ -= 2;
    return (hi << 32) | lo;
}

double CounterStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterStream::next_exponential() {
    // -log(1-u) with u in [0,1) keeps the argument strictly positive
    return -std::log1p(-next_double());
}

std::uint64_t CounterStream::next_poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("next_poisson: mean must be finite and nonnegative");
    if (mean == 0.0) return 0;
    std::uint64_t n = 0;
    double arrival = next_exponential();
    while (arrival < mean) {
        ++n;
        arrival += next_exponential();
    }
    return n;
}

}  // namespace qmoire::rng
