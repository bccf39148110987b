#include "gfnbp/rng.hpp"

#include <cmath>

#include "gfnbp/errors.hpp"

namespace gfnbp::rng {

namespace {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;

inline void mul32x32(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                     std::uint32_t& hi) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

std::array<std::uint32_t, 4> Philox::block(std::uint64_t draw) const {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(draw),
        static_cast<std::uint32_t>(draw >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mul32x32(kMulA, ctr[0], lo0, hi0);
        mul32x32(kMulB, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint32_t Philox::next32() {
    if (have_ == 0) {
        buf_ = block(draw_++);
        have_ = 4;
    }
    return buf_[4 - have_--];
}

std::uint64_t Philox::raw64() {
    std::uint64_t hi = next32();
    std::uint64_t lo = next32();
    return (hi << 32) | lo;
}

double Philox::u01() {
    return (static_cast<double>(raw64() >> 11) + 0.5) * 0x1.0p-53;
}

double Philox::exponential() { return -std::log(u01()); }

double Philox::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * u01() - 1.0;
        v = 2.0 * u01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

double Philox::gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("gamma draw: requires shape > 0");
    if (shape < 1.0) {
        double g = gamma(shape + 1.0);
        return g * std::pow(u01(), 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

}  // namespace gfnbp::rng
