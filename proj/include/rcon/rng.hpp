#pragma once

#include <cstdint>

namespace rcon {

// splitmix64 finalizer. Cheap enough to re-key per draw site, which is what
// makes every (trial, iteration, edge) draw independent of execution order.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

enum class StreamTag : std::uint64_t {
    channel = 0x11,
    sensing = 0x22,
    graph = 0x33,
    expectation = 0x44,
};

// Counter-keyed splitmix64 stream. All randomness in the toolkit derives from
// a single 64-bit master seed plus integer counters, so results are
// reproducible and independent of trial scheduling.
class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    static RngStream keyed(std::uint64_t seed, StreamTag tag, std::uint64_t a,
                           std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t s = mix64(seed + 0x9e3779b97f4a7c15ull);
        s = mix64(s ^ (static_cast<std::uint64_t>(tag) << 56) ^ a);
        s = mix64(s ^ b);
        s = mix64(s ^ c);
        return RngStream(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    // Uniform on the open interval (0,1); never returns an endpoint, so
    // log/tan transforms stay finite.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace rcon
