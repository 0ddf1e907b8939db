#include <algorithm>
#include <cfloat>
#include <cmath>

#include "psqam/kernels/kernels.hpp"

// Scalar reference kernels. Structure deliberately mirrors the AVX2 path
// (shared max shift, -708 exponent floor, DBL_MIN sum clamp) so the two stay
// numerically interchangeable.

namespace psqam::kernels::detail {

void ask_llrs_scalar(const double* y, std::size_t n, const AskDemapParams& p, double* out) {
    const int levels = p.n_levels, bits = p.n_bits;
    for (std::size_t i = 0; i < n; ++i) {
        double t[8];
        double m = -1e300;
        for (int l = 0; l < levels; ++l) {
            const double d = y[i] - p.levels[l];
            t[l] = p.log_prior[l] - d * d * p.inv_noise_var;
            m = std::max(m, t[l]);
        }
        double s0[3] = {0.0, 0.0, 0.0}, s1[3] = {0.0, 0.0, 0.0};
        for (int l = 0; l < levels; ++l) {
            const double e = std::exp(std::max(t[l] - m, -708.0));
            for (int b = 0; b < bits; ++b) {
                if ((p.labels[l] >> (bits - 1 - b)) & 1)
                    s1[b] += e;
                else
                    s0[b] += e;
            }
        }
        for (int b = 0; b < bits; ++b) {
            const double llr =
                std::log(std::max(s0[b], DBL_MIN)) - std::log(std::max(s1[b], DBL_MIN));
            out[i * bits + b] = std::clamp(llr, -p.clip, p.clip);
        }
    }
}

void mi_terms_scalar(const double* yi, const double* yq, const std::uint16_t* tx, std::size_t n,
                     const MiTermParams& p, double* terms) {
    constexpr double kInvLn2 = 1.4426950408889634074;
    const int points = p.n_points;
    for (std::size_t i = 0; i < n; ++i) {
        double t[64];
        double m = -1e300;
        for (int j = 0; j < points; ++j) {
            const double di = yi[i] - p.points_i[j];
            const double dq = yq[i] - p.points_q[j];
            t[j] = p.log_prob[j] - (di * di + dq * dq) * p.inv_noise_var;
            m = std::max(m, t[j]);
        }
        double s = 0.0;
        for (int j = 0; j < points; ++j) s += std::exp(std::max(t[j] - m, -708.0));
        terms[i] = (t[tx[i]] - (m + std::log(s))) * kInvLn2;
    }
}

}  // namespace psqam::kernels::detail
