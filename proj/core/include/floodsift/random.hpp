#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace floodsift {

/// Seeded generator with a fully specified output sequence.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++
/// standard. The distributions on top are written out here rather than
/// taken from <random>, because the standard leaves their algorithms to the
/// implementation; this keeps splits and synthetic corpora identical across
/// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound), by rejection on the top of the range.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Uniform double in [0, 1) built from the top 53 bits.
    double uniform01();

    /// Standard normal via Box-Muller (cosine branch only, one value per call).
    double normal();

    /// Fisher-Yates, walking from the back.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace floodsift
