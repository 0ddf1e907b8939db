#pragma once

#include <cstddef>
#include <cstdint>

namespace psqam::kernels {

enum class Backend { scalar, avx2 };

// Pick the widest backend the CPU supports. Called implicitly on first use;
// set_backend() overrides (throws std::runtime_error if unsupported).
Backend active_backend();
void set_backend(Backend b);
bool backend_supported(Backend b);
const char* backend_name(Backend b);

// --- per-axis LLR demapping -------------------------------------------------
//
// One PAM axis with up to 8 levels, each carrying `n_bits` label bits. For a
// received coordinate y:
//   LLR_b = log sum_{x: bit b = 0} P(x) exp(-(y-x)^2 / N0)
//         - log sum_{x: bit b = 1} P(x) exp(-(y-x)^2 / N0)
// Bits are emitted MSB-first. The prior enters through log_prior; uniform
// inputs reproduce the classic max-log-free exact LLR.
struct AskDemapParams {
    int n_levels = 8;
    int n_bits = 3;
    double levels[8] = {};
    double log_prior[8] = {};   // log P(level), floored at -690 for P=0
    std::uint8_t labels[8] = {};
    double inv_noise_var = 1.0; // 1 / N0 with N0 the *total* complex noise var
    double clip = 1e300;        // output saturation; pass +inf to disable
};

void ask_llrs(const double* y, std::size_t n, const AskDemapParams& params, double* out);

// --- mutual-information Monte-Carlo terms ------------------------------------
//
// For received samples (yi, yq) and the transmitted point index tx[i], the
// per-sample MI term is
//   log2( p(y|x_tx) / sum_j P_j p(y|x_j) )
// and E[ -that ] subtracted from H(P)... i.e. MI = H(P) + E[term]. Densities
// share the common Gaussian factor, which cancels.
struct MiTermParams {
    int n_points = 64;
    double points_i[64] = {};
    double points_q[64] = {};
    double log_prob[64] = {};   // log P_j, floored at -690
    double inv_noise_var = 1.0;
};

void mi_terms(const double* yi, const double* yq, const std::uint16_t* tx, std::size_t n,
              const MiTermParams& params, double* terms);

// direct entry points, used by the equivalence tests
namespace detail {
void ask_llrs_scalar(const double* y, std::size_t n, const AskDemapParams& p, double* out);
void ask_llrs_avx2(const double* y, std::size_t n, const AskDemapParams& p, double* out);
void mi_terms_scalar(const double* yi, const double* yq, const std::uint16_t* tx, std::size_t n,
                     const MiTermParams& p, double* terms);
void mi_terms_avx2(const double* yi, const double* yq, const std::uint16_t* tx, std::size_t n,
                   const MiTermParams& p, double* terms);
}  // namespace detail

}  // namespace psqam::kernels
