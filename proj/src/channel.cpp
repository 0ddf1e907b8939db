#include "psqam/channel.hpp"

#include <cmath>

#include "psqam/rng.hpp"

namespace psqam::channel {

double noise_variance(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

std::vector<std::complex<double>> transmit(const std::vector<std::complex<double>>& x,
                                           const ChannelConfig& cfg,
                                           std::uint64_t frame_index) {
    const double n0 = noise_variance(cfg.snr_db);
    if (n0 == 0.0) return x;
    const double sigma = std::sqrt(n0 / 2.0);  // per real component
    Rng rng = Rng::stream(cfg.seed, frame_index, std::uint64_t{0xC4A1});
    std::vector<std::complex<double>> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ni = sigma * rng.next_gaussian();
        const double nq = sigma * rng.next_gaussian();
        y[i] = x[i] + std::complex<double>(ni, nq);
    }
    return y;
}

}  // namespace psqam::channel
