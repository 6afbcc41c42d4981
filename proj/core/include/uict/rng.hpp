#pragma once

#include <array>
#include <cstdint>

namespace uict {

// Philox4x32-10 counter-based generator.
//
// A (seed, stream) pair names an independent sequence of 2^64 blocks of four
// 32-bit words. Replicas use stream = replica index, and anything that needs
// further sub-streams derives them with split(). The object satisfies
// UniformRandomBitGenerator so it can drive <random> distributions.
class Rng {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    std::uint32_t next_u32() noexcept {
        if (pos_ == 4) refill();
        return buffer_[pos_++];
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_open_zero() noexcept { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

    // Uniform integer in [0, n), n > 0 (Lemire's nearly divisionless method).
    std::uint32_t below(std::uint32_t n) noexcept {
        std::uint64_t m = std::uint64_t{next_u32()} * n;
        auto low = static_cast<std::uint32_t>(m);
        if (low < n) {
            const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
            while (low < threshold) {
                m = std::uint64_t{next_u32()} * n;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    std::uint64_t below64(std::uint64_t n) noexcept;

    // Child generator on a stream derived from (stream(), sub).
    [[nodiscard]] Rng split(std::uint64_t sub) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    static Block philox(Block counter, Key key) noexcept;

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    unsigned pos_ = 4;
};

// SplitMix64 finalizer; used to derive stream ids and hashes.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace uict
