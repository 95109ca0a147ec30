#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace evidencer {

// mt19937_64 output is pinned by the standard, but the std distributions and
// std::shuffle are not, so bounded draws and shuffles are implemented here to
// keep seeded runs identical across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, n), rejection sampled.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derive an independent stream, e.g. one per tree or per fold.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace evidencer
