#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace netsis {

/// Seed type used throughout: identical seed implies identical output.
using RngSeed = std::uint64_t;

// 64-bit finalizer used to derive independent stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stateless per-stream seed derivation, so a run/graph index can be seeded
/// independently of the order in which workers pick up jobs.
inline RngSeed derive_seed(RngSeed master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 0x51ed2701));
}

/// mt19937_64 engine with hand-rolled uniform/exponential transforms.
/// The standard pins the engine's output sequence exactly; the transforms
/// below avoid std::uniform_real_distribution, whose output is
/// implementation-defined, so streams are reproducible across toolchains.
class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// uniform in [0,1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// uniform in (0,1], safe as a log() argument
    double uniform_pos() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double exponential(double rate) {
        return -std::log(uniform_pos()) / rate;
    }

    /// unbiased uniform integer in [0, n), n >= 1
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace netsis
