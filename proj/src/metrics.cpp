#include "psqam/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "psqam/kernels/kernels.hpp"
#include "psqam/rng.hpp"

namespace psqam::metrics {

namespace {

constexpr double kInvLn2 = 1.4426950408889634074;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kLogFloor = -690.0;

double noise_var_of(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

// log(1 + e^z), overflow-safe
double softplus(double z) {
    const double m = z > 0.0 ? z : 0.0;
    return m + std::log1p(std::exp(-std::fabs(z)));
}

// per-axis MI of the 8-level distribution by Gauss-Hermite quadrature; the
// QAM value is twice this by the I/Q product structure
double axis_mi_quadrature(const shaping::ShapedConstellation& c, double snr_db, int nodes) {
    const double sigma2 = noise_var_of(snr_db) / 2.0;  // per-axis noise variance
    std::vector<double> gx, gw;
    gauss_hermite(nodes, gx, gw);

    const auto& level = c.axis_levels();
    const auto& prob = c.axis_probs();
    const int n = shaping::kAxisLevels;

    double h_axis = 0.0;
    for (int l = 0; l < n; ++l)
        if (prob[l] > 0.0) h_axis -= prob[l] * std::log2(prob[l]);

    const double spread = std::sqrt(2.0 * sigma2);
    double h_cond = 0.0;  // H(X|Y) per axis
    for (int x = 0; x < n; ++x) {
        if (prob[x] <= 0.0) continue;
        for (int i = 0; i < nodes; ++i) {
            const double y = level[x] + spread * gx[i];
            double t[shaping::kAxisLevels];
            double m = -1e300;
            for (int j = 0; j < n; ++j) {
                if (prob[j] <= 0.0) {
                    t[j] = -1e300;
                    continue;
                }
                const double d = y - level[j];
                t[j] = std::log(prob[j]) - d * d / (2.0 * sigma2);
                m = std::max(m, t[j]);
            }
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                if (prob[j] > 0.0) s += std::exp(std::max(t[j] - m, -708.0));
            const double log2_post = (t[x] - (m + std::log(s))) * kInvLn2;
            h_cond -= prob[x] * (gw[i] / kSqrtPi) * log2_post;
        }
    }
    return h_axis - h_cond;
}

// inverse-CDF draw of one axis level
int draw_level(const double* cdf, double u) {
    int l = 0;
    while (l < shaping::kAxisLevels - 1 && u >= cdf[l]) ++l;
    return l;
}

}  // namespace

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
        // initial guesses, largest root first (standard asymptotic seeds)
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * nodes[1];
        else
            z = 2.0 * z - nodes[i - 2];
        for (int it = 0; it < 100; ++it) {
            // orthonormal Hermite recurrence keeps magnitudes tame at n = 40+
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-14) break;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

MiEstimate mutual_information(const shaping::ShapedConstellation& c, double snr_db,
                              const MiOptions& opts) {
    MiEstimate est;
    est.method = opts.method;
    if (opts.method == MiMethod::quadrature) {
        est.value_bits = 2.0 * axis_mi_quadrature(c, snr_db, opts.quad_nodes);
        est.samples = static_cast<std::size_t>(opts.quad_nodes);
        return est;
    }

    const double n0 = noise_var_of(snr_db);
    const double sigma_axis = std::sqrt(n0 / 2.0);

    kernels::MiTermParams params;
    params.n_points = 64;
    params.inv_noise_var = 1.0 / n0;
    for (int j = 0; j < 64; ++j) {
        params.points_i[j] = c.points_i()[j];
        params.points_q[j] = c.points_q()[j];
        const double p = c.probs()[j];
        params.log_prob[j] = p > 0.0 ? std::max(std::log(p), kLogFloor) : kLogFloor;
    }
    double cdf[shaping::kAxisLevels];
    double acc = 0.0;
    for (int l = 0; l < shaping::kAxisLevels; ++l) {
        acc += c.axis_probs()[l];
        cdf[l] = acc;
    }

    Rng rng = Rng::stream(opts.seed, std::uint64_t{0x4D49});
    const std::size_t batch = 8192;
    std::vector<double> yi(batch), yq(batch), terms(batch);
    std::vector<std::uint16_t> tx(batch);

    double sum = 0.0, sumsq = 0.0;
    std::size_t done = 0;
    while (done < opts.samples) {
        const std::size_t m = std::min(batch, opts.samples - done);
        for (std::size_t i = 0; i < m; ++i) {
            const int ui = draw_level(cdf, rng.next_double());
            const int uq = draw_level(cdf, rng.next_double());
            tx[i] = static_cast<std::uint16_t>((ui << 3) | uq);
            yi[i] = c.axis_levels()[ui] + sigma_axis * rng.next_gaussian();
            yq[i] = c.axis_levels()[uq] + sigma_axis * rng.next_gaussian();
        }
        kernels::mi_terms(yi.data(), yq.data(), tx.data(), m, params, terms.data());
        for (std::size_t i = 0; i < m; ++i) {
            sum += terms[i];
            sumsq += terms[i] * terms[i];
        }
        done += m;
    }
    const double n = static_cast<double>(opts.samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    est.value_bits = c.entropy_bits() + mean;
    est.std_error = std::sqrt(var / n);
    est.samples = opts.samples;
    return est;
}

MiEstimate bit_metric_rate(const shaping::ShapedConstellation& c, double snr_db,
                           std::size_t samples, std::uint64_t seed) {
    const double n0 = noise_var_of(snr_db);
    const double sigma_axis = std::sqrt(n0 / 2.0);

    kernels::AskDemapParams params;
    params.n_levels = shaping::kAxisLevels;
    params.n_bits = 3;
    params.inv_noise_var = 1.0 / n0;
    params.clip = HUGE_VAL;  // the rate estimate wants the raw LLRs
    for (int u = 0; u < shaping::kAxisLevels; ++u) {
        params.levels[u] = c.axis_levels()[u];
        const double p = c.axis_probs()[u];
        params.log_prior[u] = p > 0.0 ? std::max(std::log(p), kLogFloor) : kLogFloor;
        params.labels[u] = static_cast<std::uint8_t>(u);
    }
    double cdf[shaping::kAxisLevels];
    double acc = 0.0;
    for (int l = 0; l < shaping::kAxisLevels; ++l) {
        acc += c.axis_probs()[l];
        cdf[l] = acc;
    }

    Rng rng = Rng::stream(seed, std::uint64_t{0x9B17});
    const std::size_t batch = 8192;
    std::vector<double> y(batch), llrs(batch * 3);
    std::vector<int> lv(batch);

    // per-sample bit-metric cost over the 3 bit levels of one axis; the two
    // axes are i.i.d., so the QAM rate subtracts twice the axis average
    double sum = 0.0, sumsq = 0.0;
    std::size_t done = 0;
    while (done < samples) {
        const std::size_t m = std::min(batch, samples - done);
        for (std::size_t i = 0; i < m; ++i) {
            lv[i] = draw_level(cdf, rng.next_double());
            y[i] = c.axis_levels()[lv[i]] + sigma_axis * rng.next_gaussian();
        }
        kernels::ask_llrs(y.data(), m, params, llrs.data());
        for (std::size_t i = 0; i < m; ++i) {
            double cost = 0.0;  // sum_b -log2 q(b_true | y)
            for (int b = 0; b < 3; ++b) {
                const int bit = (lv[i] >> (2 - b)) & 1;
                const double l = llrs[i * 3 + b];
                cost += softplus(bit ? l : -l) * kInvLn2;
            }
            const double t = 2.0 * cost;
            sum += t;
            sumsq += t * t;
        }
        done += m;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    MiEstimate est;
    est.method = MiMethod::monte_carlo;
    est.value_bits = c.entropy_bits() - mean;
    est.std_error = std::sqrt(var / n);
    est.samples = samples;
    return est;
}

double required_snr(const shaping::ShapedConstellation& c, double target_bits,
                    double tolerance_db, int quad_nodes) {
    if (!(target_bits > 0.0) || target_bits >= c.entropy_bits())
        throw std::domain_error("required_snr: target must lie in (0, entropy)");
    double lo = -30.0, hi = 60.0;
    MiOptions opts;
    opts.quad_nodes = quad_nodes;
    while (hi - lo > tolerance_db) {
        const double mid = 0.5 * (lo + hi);
        if (mutual_information(c, mid, opts).value_bits >= target_bits)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

void ErrorStats::add_frame(std::size_t payload_bits, std::size_t payload_bit_errors) {
    frames += 1;
    frame_errors += payload_bit_errors > 0 ? 1 : 0;
    bits += payload_bits;
    bit_errors += payload_bit_errors;
}

void accumulate_errors(ErrorStats& stats, const std::vector<std::uint8_t>& reference,
                       const std::vector<std::uint8_t>& decoded) {
    if (reference.size() != decoded.size())
        throw std::invalid_argument("accumulate_errors: length mismatch");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < reference.size(); ++i)
        if (reference[i] != decoded[i]) ++errors;
    stats.add_frame(reference.size(), errors);
}

}  // namespace psqam::metrics
