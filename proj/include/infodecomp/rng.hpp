#ifndef INFODECOMP_RNG_HPP
#define INFODECOMP_RNG_HPP

#include <array>
#include <cstdint>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace infodecomp {

// All randomness in the library flows through named streams derived from a
// single user seed, so results do not depend on evaluation order or thread
// schedule. The generator is xoshiro256++ seeded via splitmix64; both are
// fixed algorithms, unlike std::shuffle / std::normal_distribution whose
// output is implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream identifiers: mix every path component through splitmix64.
inline std::uint64_t derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = seed ^ 0x8f2d1c3b5a697e4dULL;
    for (std::uint64_t p : path) {
        s = splitmix64(s) ^ (p * 0x9e3779b97f4a7c15ULL);
    }
    return splitmix64(s);
}

// Purposes keep unrelated streams apart even when their numeric path
// components collide.
enum class StreamPurpose : std::uint64_t {
    scenario = 1,
    mi_surrogate = 2,
    min_surrogate = 3,
    max_surrogate = 4,
    jitter = 5,
    resample = 6,
    mc_oracle = 7,
    repeat = 8,
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
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

    // uniform in [0, 1) with 53 random bits
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // standard normal via the Marsaglia polar method (deterministic, no tables)
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // unbiased integer in [0, bound) by rejection
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Fisher-Yates
    template <typename T>
    void shuffle(T* data, std::size_t n) {
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            T tmp = data[i - 1];
            data[i - 1] = data[j];
            data[j] = tmp;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        shuffle(v.data(), v.size());
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace infodecomp

#endif  // INFODECOMP_RNG_HPP
