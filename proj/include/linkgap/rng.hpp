#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace linkgap {

/// Deterministic splitmix64-based generator. Self-contained so that seeded
/// runs produce byte-identical reports independent of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent stream derived from (seed, stream); used to make parallel
    /// work items deterministic regardless of scheduling.
    static Rng fork(std::uint64_t seed, std::uint64_t stream) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        r.next_u64();
        r.next_u64();
        return r;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller (no cached spare, keeps streams simple).
    double normal() {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace linkgap
