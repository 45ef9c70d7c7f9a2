#pragma once

#include <array>
#include <cstdint>

namespace octrack {

// Counter-based Philox4x32-10 stream.
//
// A stream is identified by (seed, index). The index is mixed into the Philox
// key, so streams with different indices are independent sequences while the
// same pair always replays the same draws. Draws advance a 128-bit counter;
// nothing depends on global state or wall-clock time.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t index);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t index() const noexcept { return index_; }

    // Child stream keyed by (seed, mix(index, child)); used to hand each Monte
    // Carlo repetition or synthesis start its own sequence.
    [[nodiscard]] RngStream split(std::uint64_t child) const;

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);
    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal();

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t index_;
    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

// SplitMix64 finalizer; exposed for seeding helpers.
std::uint64_t mix64(std::uint64_t x) noexcept;

namespace detail {
// One Philox4x32-10 block; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);
}  // namespace detail

}  // namespace octrack
