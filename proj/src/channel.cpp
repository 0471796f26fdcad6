#include "lrmimo/channel.hpp"

#include <cmath>

#include "lrmimo/rng.hpp"

namespace lrmimo {

ChannelRealization sample_channel(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  rng::Generator gen(seed);
  Matrix g(cfg.antennas, cfg.users);
  // Column-major draw order fixes the stream layout for reproducibility.
  for (int k = 0; k < cfg.users; ++k) {
    const double scale = std::sqrt(cfg.fading[k]);
    for (int m = 0; m < cfg.antennas; ++m) g(m, k) = scale * gen.complex_gaussian();
  }
  return {std::move(g), seed};
}

double gram_diag_mean(const Matrix& g) {
  if (g.rows() == 0) return 0.0;
  return g.rowwise().squaredNorm().mean();
}

}  // namespace lrmimo
