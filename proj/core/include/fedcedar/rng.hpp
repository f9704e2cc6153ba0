#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace fedcedar {

// Stream tags used when deriving independent seeds from the master seed.
enum class Stream : std::uint64_t {
    data = 1,
    model_init = 2,
    sampling = 3,
    shuffle = 4,
    clustering = 5,
    topology = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

// Hash a base seed together with an ordered list of counters. The result
// depends only on the inputs, so a stream can be reconstructed from
// (seed, counters) regardless of the order in which streams are created.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters);

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                                 std::initializer_list<std::uint64_t> counters = {}) {
    std::uint64_t s = derive_seed(base, {static_cast<std::uint64_t>(stream)});
    return counters.size() == 0 ? s : derive_seed(s, counters);
}

// Portable random stream. Only the raw mt19937_64 output is used; the
// distributions are implemented here so results do not depend on the
// standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    double normal();

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace fedcedar
