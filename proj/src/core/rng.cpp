#include "tryon/core/rng.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace tryon::core {

Rng::Rng(uint64_t seed) : eng_(seed) {}

double Rng::uniform() {
    return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
    if (hi <= lo) throw std::invalid_argument("uniform_int: empty range");
    uint64_t span = static_cast<uint64_t>(hi - lo);
    return lo + static_cast<int>(eng_() % span);
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller; u1 kept away from 0.
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 1e-300);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

Tensor Rng::uniform_tensor(const Shape& shape, double lo, double hi) {
    Tensor t(shape);
    for (int i = 0; i < t.numel(); ++i) t[i] = uniform(lo, hi);
    return t;
}

Tensor Rng::normal_tensor(const Shape& shape) {
    Tensor t(shape);
    for (int i = 0; i < t.numel(); ++i) t[i] = normal();
    return t;
}

Rng Rng::fork(uint64_t salt) {
    uint64_t s = eng_() ^ (salt * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
    return Rng(s);
}

std::string Rng::state() const {
    std::ostringstream os;
    os << eng_;
    os << " " << (has_cached_ ? 1 : 0);
    if (has_cached_) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%a", cached_);
        os << " " << buf;
    }
    return os.str();
}

void Rng::set_state(const std::string& s) {
    std::istringstream is(s);
    is >> eng_;
    int flag = 0;
    is >> flag;
    has_cached_ = (flag == 1);
    if (has_cached_) {
        std::string hex;
        is >> hex;
        cached_ = std::strtod(hex.c_str(), nullptr);
    }
    if (is.fail()) throw std::invalid_argument("Rng::set_state: malformed state string");
}

}  // namespace tryon::core
