#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace nlch {

// Counter-based Gaussian generator. Every draw is a pure function of
// (master_seed, path_index, stream, step, mode), so ensembles are
// order-independent and parallelizable, and the increments a path sees for
// mode k do not depend on how many modes are retained. The word mixer is the
// splitmix64 finalizer applied per coordinate.
class CounterRng {
public:
    enum class Stream : std::uint64_t { Noise = 1, InitialCondition = 2 };

    CounterRng(std::uint64_t master_seed, std::uint64_t path_index, Stream stream) {
        std::uint64_t k = finalize(master_seed + 0x9E3779B97F4A7C15ULL);
        k = finalize(k ^ (path_index + 0xD1B54A32D192ED03ULL));
        k = finalize(k + static_cast<std::uint64_t>(stream) * 0x8CB92BA72F3D8DD7ULL);
        key_ = k;
    }

    // Uniform in [0,1) from the (step, mode, salt) counter.
    double uniform(std::uint64_t step, std::uint64_t mode, std::uint64_t salt) const {
        return static_cast<double>(word(step, mode, salt) >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller on two counter words.
    double normal(std::uint64_t step, std::uint64_t mode) const {
        const double u1 = 1.0 - uniform(step, mode, 0); // (0, 1]
        const double u2 = uniform(step, mode, 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t key() const { return key_; }

private:
    static std::uint64_t finalize(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t word(std::uint64_t step, std::uint64_t mode, std::uint64_t salt) const {
        std::uint64_t h = key_;
        h = finalize(h + (step + 1) * 0x9E3779B97F4A7C15ULL);
        h = finalize(h + (mode + 1) * 0xC2B2AE3D27D4EB4FULL);
        h = finalize(h + salt * 0x165667B19E3779F9ULL);
        return h;
    }

    std::uint64_t key_;
};

} // namespace nlch
