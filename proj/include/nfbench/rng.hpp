#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace nfb::rng {

// 64-bit FNV-1a over a byte string. Used to derive stable sub-seeds from
// human-readable keys ("dataset|spec|stage|seed") so that results never
// depend on execution order.
std::uint64_t fnv1a(std::string_view s);

// splitmix64 finalizer; combines seed material without short cycles.
std::uint64_t mix(std::uint64_t a, std::uint64_t b);

// derive(seed, {"NF-BoT-IoT", "SMOTE+Tomek", "over"}) -> stable sub-seed
std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::string_view> parts);

// mt19937_64 with pinned output distributions. The engine is fully specified
// by the standard; the std:: distributions are not, so the draws below are
// implemented here to keep outputs byte-identical across library versions.
class Engine {
public:
    explicit Engine(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller (two uniforms per draw, no cached state)
    double normal();

    // unbiased integer in [0, n) by rejection
    std::uint64_t below(std::uint64_t n);

    // Fisher-Yates in-place shuffle
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace nfb::rng
