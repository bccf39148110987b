#pragma once

#include <array>
#include <cstdint>

namespace gfnbp::rng {

// Counter-based generator (Philox4x32-10). A stream is keyed by the master
// seed and indexed by a 64-bit stream id, so per-path streams are independent
// by construction and identical no matter which thread runs them.
class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t raw64();
    double u01();                // uniform on (0, 1), endpoints excluded
    double exponential();        // unit rate
    double normal();             // standard normal
    double gamma(double shape);  // unit scale, shape > 0

  private:
    std::array<std::uint32_t, 4> block(std::uint64_t draw) const;
    std::uint32_t next32();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t draw_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int have_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gfnbp::rng
