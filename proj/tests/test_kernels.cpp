#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "psqam/kernels/kernels.hpp"
#include "psqam/rng.hpp"
#include "psqam/shaping.hpp"
#include "test_util.hpp"

using namespace psqam;
using kernels::AskDemapParams;
using kernels::MiTermParams;

namespace {

AskDemapParams bpsk_params(double noise_var, double p0 = 0.5) {
    AskDemapParams p;
    p.n_levels = 2;
    p.n_bits = 1;
    p.levels[0] = 1.0;
    p.levels[1] = -1.0;
    p.log_prior[0] = std::log(p0);
    p.log_prior[1] = std::log(1.0 - p0);
    p.labels[0] = 0;
    p.labels[1] = 1;
    p.inv_noise_var = 1.0 / noise_var;
    p.clip = 1e9;
    return p;
}

AskDemapParams shaped_axis_params(const shaping::ShapedConstellation& c, double noise_var) {
    AskDemapParams p;
    p.n_levels = 8;
    p.n_bits = 3;
    p.inv_noise_var = 1.0 / noise_var;
    p.clip = 1e9;
    for (int u = 0; u < 8; ++u) {
        p.levels[u] = c.axis_levels()[u];
        p.log_prior[u] = std::log(c.axis_probs()[u]);
        p.labels[u] = static_cast<std::uint8_t>(u);
    }
    return p;
}

bool close(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST_CASE("2-level uniform LLR matches the closed form 4y/N0") {
    const double n0 = 0.37;
    const auto p = bpsk_params(n0);
    const double ys[] = {-2.0, -0.3, 0.0, 0.51, 1.7};
    double out[5];
    kernels::ask_llrs(ys, 5, p, out);
    for (int i = 0; i < 5; ++i) CHECK(close(out[i], 4.0 * ys[i] / n0));
}

TEST_CASE("prior shifts the 2-level LLR by the log prior ratio") {
    const double n0 = 0.5, p0 = 0.8;
    const auto p = bpsk_params(n0, p0);
    const double y = 0.23;
    double out;
    kernels::ask_llrs(&y, 1, p, &out);
    CHECK(close(out, 4.0 * y / n0 + std::log(p0 / (1.0 - p0))));
}

TEST_CASE("clipping saturates the output") {
    auto p = bpsk_params(0.01);
    p.clip = 24.0;
    const double ys[] = {5.0, -5.0};
    double out[2];
    kernels::ask_llrs(ys, 2, p, out);
    CHECK(out[0] == 24.0);
    CHECK(out[1] == -24.0);
}

TEST_CASE("shaped-axis LLRs agree with a naive long-double evaluation") {
    const auto c = shaping::ShapedConstellation::maxwell_boltzmann(0.0872);
    const double n0 = 0.08;
    const auto p = shaped_axis_params(c, n0);
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const double y = (rng.next_double() * 2.0 - 1.0) * 1.5;
        double out[3];
        kernels::ask_llrs(&y, 1, p, out);
        for (int b = 0; b < 3; ++b) {
            long double s0 = 0.0L, s1 = 0.0L;
            for (int u = 0; u < 8; ++u) {
                const long double d = y - p.levels[u];
                const long double v = std::exp(p.log_prior[u] - double(d * d) / n0);
                if ((u >> (2 - b)) & 1)
                    s1 += v;
                else
                    s0 += v;
            }
            CHECK(close(out[b], static_cast<double>(std::log(s0) - std::log(s1)), 1e-9));
        }
    }
}

TEST_CASE("mi terms match the naive oracle") {
    const auto c = shaping::ShapedConstellation::maxwell_boltzmann(0.052);
    MiTermParams p;
    p.n_points = 64;
    p.inv_noise_var = 1.0 / 0.15;
    for (int j = 0; j < 64; ++j) {
        p.points_i[j] = c.points_i()[j];
        p.points_q[j] = c.points_q()[j];
        p.log_prob[j] = std::log(c.probs()[j]);
    }
    Rng rng(19);
    const std::size_t n = 64;
    std::vector<double> yi(n), yq(n), terms(n);
    std::vector<std::uint16_t> tx(n);
    for (std::size_t i = 0; i < n; ++i) {
        tx[i] = static_cast<std::uint16_t>(rng.next_u64() % 64);
        yi[i] = p.points_i[tx[i]] + 0.4 * (rng.next_double() - 0.5);
        yq[i] = p.points_q[tx[i]] + 0.4 * (rng.next_double() - 0.5);
    }
    kernels::mi_terms(yi.data(), yq.data(), tx.data(), n, p, terms.data());
    for (std::size_t i = 0; i < n; ++i) {
        const double oracle = testutil::naive_mi_term(p.points_i, p.points_q, p.log_prob, yi[i],
                                                      yq[i], p.inv_noise_var, tx[i], 64);
        CHECK(close(terms[i], oracle, 1e-9));
    }
}

TEST_CASE("scalar and avx2 kernels are numerically interchangeable") {
    if (!kernels::backend_supported(kernels::Backend::avx2)) {
        MESSAGE("avx2 not available on this cpu; equivalence not exercised");
        return;
    }
    const auto c = shaping::ShapedConstellation::maxwell_boltzmann(0.122);
    Rng rng(23);

    // demapper, several noise levels including ones that underflow class sums
    for (double n0 : {1e-4, 0.01, 0.2, 1.0, 30.0}) {
        const auto p = shaped_axis_params(c, n0);
        const std::size_t n = 1003;  // odd length exercises the scalar tail
        std::vector<double> y(n), a(n * 3), b(n * 3);
        for (auto& v : y) v = (rng.next_double() * 2.0 - 1.0) * 2.0;
        kernels::detail::ask_llrs_scalar(y.data(), n, p, a.data());
        kernels::detail::ask_llrs_avx2(y.data(), n, p, b.data());
        for (std::size_t i = 0; i < n * 3; ++i) CHECK(close(a[i], b[i], 1e-9));
    }

    MiTermParams mp;
    mp.n_points = 64;
    mp.inv_noise_var = 1.0 / 0.05;
    for (int j = 0; j < 64; ++j) {
        mp.points_i[j] = c.points_i()[j];
        mp.points_q[j] = c.points_q()[j];
        mp.log_prob[j] = std::log(c.probs()[j]);
    }
    const std::size_t n = 517;
    std::vector<double> yi(n), yq(n), ta(n), tb(n);
    std::vector<std::uint16_t> tx(n);
    for (std::size_t i = 0; i < n; ++i) {
        tx[i] = static_cast<std::uint16_t>(rng.next_u64() % 64);
        yi[i] = mp.points_i[tx[i]] + (rng.next_double() - 0.5);
        yq[i] = mp.points_q[tx[i]] + (rng.next_double() - 0.5);
    }
    kernels::detail::mi_terms_scalar(yi.data(), yq.data(), tx.data(), n, mp, ta.data());
    kernels::detail::mi_terms_avx2(yi.data(), yq.data(), tx.data(), n, mp, tb.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(close(ta[i], tb[i], 1e-9));
}

TEST_CASE("backend selection is explicit and reversible") {
    const auto original = kernels::active_backend();
    kernels::set_backend(kernels::Backend::scalar);
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    CHECK(kernels::backend_name(kernels::Backend::scalar) == std::string("scalar"));
    if (kernels::backend_supported(kernels::Backend::avx2)) {
        kernels::set_backend(kernels::Backend::avx2);
        CHECK(kernels::active_backend() == kernels::Backend::avx2);
    }
    kernels::set_backend(original);
}
