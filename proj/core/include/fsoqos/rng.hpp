#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace fsoqos {

/// Mixes a base seed with a stream index (splitmix64 finalizer), so that
/// per-tree or per-fold generators are independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator whose draws depend only on the 64-bit engine output, so
/// results are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);
    /// Standard normal (Box-Muller).
    double normal();

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fsoqos
