#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace psqam::channel {

struct ChannelConfig {
    double snr_db = 10.0;       // Es/N0 in dB, Es = 1 by construction
    std::uint64_t seed = 1;
};

// total complex noise variance N0 = 10^(-snr_db/10); +inf snr -> 0
double noise_variance(double snr_db);

// Complex AWGN, sigma^2 = N0/2 per real component. The noise stream depends
// only on (seed, frame_index), so results are reproducible regardless of how
// frames are distributed over threads.
std::vector<std::complex<double>> transmit(const std::vector<std::complex<double>>& x,
                                           const ChannelConfig& cfg,
                                           std::uint64_t frame_index = 0);

}  // namespace psqam::channel
