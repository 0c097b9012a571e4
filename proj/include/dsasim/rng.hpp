#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace dsasim {

// xoshiro256++ behind a splitmix64 seeder. The standard <random>
// distributions are not sequence-stable across library versions, and the
// simulator promises byte-identical replays, so both the generator and the
// gaussian transform are spelled out here.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            word = splitmix64(x);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; one draw per call, no cached spare
    double gaussian() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    bool bit() { return (next_u64() >> 63) != 0; }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

// Independent substream for (master seed, stream id); used to keep bit
// generation, channel noise and environment noise decoupled.
inline Rng derive_rng(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t x = master_seed;
    std::uint64_t a = Rng::splitmix64(x);
    x = a ^ (stream_id * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);
    return Rng(Rng::splitmix64(x));
}

}  // namespace dsasim
