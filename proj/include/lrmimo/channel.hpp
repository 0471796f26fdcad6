#pragma once

#include <cstdint>

#include "lrmimo/types.hpp"

namespace lrmimo {

struct ChannelRealization {
  Matrix g;                    // antennas x users; column k has variance d_k
  std::uint64_t seed_tag = 0;  // seed that reproduces this draw
};

/// Rayleigh block-fading draw: iid unit complex-Gaussian small-scale fading,
/// column k scaled by sqrt(d_k). Deterministic for a fixed seed.
ChannelRealization sample_channel(const SystemConfig& cfg, std::uint64_t seed);

/// Mean of diag(g g^H), i.e. the average per-antenna received signal power
/// at unit transmit power.
double gram_diag_mean(const Matrix& g);

}  // namespace lrmimo
