#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "helpers.hpp"

using namespace octrack;

TEST_CASE("philox4x32-10 known answers") {
    using B = std::array<std::uint32_t, 4>;
    CHECK(detail::philox4x32_10(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(detail::philox4x32_10(B{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(detail::philox4x32_10(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("same seed and index replay the same draws") {
    RngStream a(42, 3);
    RngStream b(42, 3);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
        REQUIRE(a.normal() == b.normal());
    }
}

TEST_CASE("distinct indices and splits give different streams") {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t idx = 0; idx < 64; ++idx) firsts.insert(RngStream(7, idx).next_u64());
    CHECK(firsts.size() == 64);
    const RngStream root(7, 0);
    CHECK(root.split(0).next_u64() != root.split(1).next_u64());
    CHECK(root.split(5).next_u64() == root.split(5).next_u64());
}

TEST_CASE("uniform and normal moments") {
    RngStream rng(1, 0);
    const int N = 200000;
    double s = 0.0;
    double s2 = 0.0;
    double umin = 1.0;
    double umax = 0.0;
    for (int i = 0; i < N; ++i) {
        const double u = rng.uniform();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        s += u;
    }
    CHECK(umin >= 0.0);
    CHECK(umax < 1.0);
    CHECK(std::abs(s / N - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / N));
    s = 0.0;
    for (int i = 0; i < N; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / N) < 4.0 / std::sqrt(N));
    CHECK(std::abs(s2 / N - 1.0) < 4.0 * std::sqrt(2.0 / N));
}

TEST_CASE("lag-1 correlation of normals is negligible") {
    RngStream rng(99, 4);
    const int N = 100000;
    double prev = rng.normal();
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double z = rng.normal();
        acc += z * prev;
        prev = z;
    }
    CHECK(std::abs(acc / N) < 4.0 / std::sqrt(N));
}
