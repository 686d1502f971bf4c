#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "tryon/core/tensor.hpp"

namespace tryon::core {

// Deterministic RNG. Uniform and normal draws are implemented on top of the
// raw mt19937_64 stream (Box-Muller for normals) instead of the standard
// distributions, so sequences are identical across standard libraries and a
// serialized state resumes bit-for-bit.
class Rng {
public:
    explicit Rng(uint64_t seed = 0x5eed);

    uint64_t draw_u64() { return eng_(); }

    // Uniform in [0,1) with 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi);
    // Integer in [lo, hi) — hi exclusive.
    int uniform_int(int lo, int hi);
    double normal();

    Tensor uniform_tensor(const Shape& shape, double lo = 0.0, double hi = 1.0);
    Tensor normal_tensor(const Shape& shape);

    // Derive an independent child stream (used for per-epoch shuffles).
    Rng fork(uint64_t salt);

    std::string state() const;
    void set_state(const std::string& s);

private:
    std::mt19937_64 eng_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace tryon::core
