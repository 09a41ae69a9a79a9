#pragma once

#include <array>
#include <cstdint>

namespace intrinsic {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011 parameters).
/// Pure function of (counter, key); no hidden state.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// Independent random stream for one (seed, stream index) pair, e.g. one
/// Monte Carlo path. Results do not depend on how streams are scheduled.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream);

    /// Uniform on the open interval (0,1), 53-bit resolution.
    double uniform();
    /// Standard normal via Box-Muller.
    double normal();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace intrinsic
