#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "psqam/shaping.hpp"

namespace psqam::metrics {

enum class MiMethod { monte_carlo, quadrature };

struct MiOptions {
    MiMethod method = MiMethod::quadrature;
    std::size_t samples = 200000;     // Monte-Carlo draws
    std::uint64_t seed = 1;
    int quad_nodes = 40;              // Gauss-Hermite points per dimension
};

struct MiEstimate {
    double value_bits = 0.0;
    double std_error = 0.0;           // zero for the quadrature method
    std::size_t samples = 0;          // draws (MC) or nodes per dimension
    MiMethod method = MiMethod::quadrature;
};

// I(X;Y) in bits for the shaped constellation over complex AWGN at the given
// SNR (dB, Es/N0). Quadrature exploits the I/Q product structure and is the
// oracle; Monte-Carlo is the independent cross-check with a std error.
MiEstimate mutual_information(const shaping::ShapedConstellation& c, double snr_db,
                              const MiOptions& opts = {});

// Achievable rate of a bit-metric (bit-wise) receiver under the shaped prior:
// H(X) - sum_b H(B_b|Y), estimated from exact per-bit LLRs. Monte-Carlo.
MiEstimate bit_metric_rate(const shaping::ShapedConstellation& c, double snr_db,
                           std::size_t samples = 200000, std::uint64_t seed = 1);

// Smallest SNR (dB) whose quadrature MI reaches target_bits; bisection over
// [-30, 60], valid because MI is monotone in SNR.
double required_snr(const shaping::ShapedConstellation& c, double target_bits,
                    double tolerance_db = 1e-4, int quad_nodes = 40);

// Gauss-Hermite nodes/weights for integral of f(t)*exp(-t^2): sum w_i f(x_i)
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

// --- error accounting ---------------------------------------------------------

struct ErrorStats {
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;

    double frame_error_rate() const {
        return frames ? static_cast<double>(frame_errors) / frames : 0.0;
    }
    double bit_error_rate() const {
        return bits ? static_cast<double>(bit_errors) / bits : 0.0;
    }
    void add_frame(std::size_t payload_bits, std::size_t payload_bit_errors);
};

// exact Hamming accounting; one frame per call, frame error iff any bit differs
void accumulate_errors(ErrorStats& stats, const std::vector<std::uint8_t>& reference,
                       const std::vector<std::uint8_t>& decoded);

}  // namespace psqam::metrics
