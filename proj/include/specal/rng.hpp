#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace specal {

/// splitmix64 step; the standard 64-bit finalizer-based mixer.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives a child seed from a parent seed and a stream tag. Chaining tags
/// gives the master -> repetition -> fold hierarchy without correlation
/// between siblings.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag_a, std::uint64_t tag_b);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag_a, std::uint64_t tag_b,
                          std::uint64_t tag_c);

/// mt19937_64 engine with hand-rolled distributions. The standard leaves
/// distribution algorithms implementation-defined; these are fixed here so
/// seeded runs reproduce across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller (both values used, fixed order).
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace specal
