#include "psqam/shaping.hpp"

#include <cmath>
#include <stdexcept>

namespace psqam::shaping {

namespace {
constexpr double kUnscaledAmps[kAmplitudes] = {1.0, 3.0, 5.0, 7.0};

double entropy_of(const double* p, int n) {
    double h = 0.0;
    for (int i = 0; i < n; ++i)
        if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
    return h;
}

int gray2(int k) { return k ^ (k >> 1); }       // 2-bit reflected binary
int igray2(int g) { return g ^ (g >> 1); }      // self-inverse at 2 bits
}  // namespace

int ShapedConstellation::label_of(int sign_i, int mag_i, int sign_q, int mag_q) {
    const int ui = (sign_i << 2) | gray2(mag_i);
    const int uq = (sign_q << 2) | gray2(mag_q);
    return (ui << 3) | uq;
}

int ShapedConstellation::level_magnitude(int level) { return igray2(level & 3); }
int ShapedConstellation::level_sign(int level) { return (level >> 2) & 1; }

ShapedConstellation ShapedConstellation::maxwell_boltzmann(double nu) {
    if (!std::isfinite(nu) || nu < 0.0)
        throw std::domain_error("maxwell_boltzmann: nu must be finite and >= 0");
    ShapedConstellation c;
    c.nu_ = nu;
    double z = 0.0;
    // factor out the innermost energy so huge nu degrades to (1,0,0,0)
    // instead of 0/0
    const double e_min = kUnscaledAmps[0] * kUnscaledAmps[0];
    for (int a = 0; a < kAmplitudes; ++a) {
        const double amp = kUnscaledAmps[a];
        c.amplitude_probs_[a] = std::exp(-nu * (amp * amp - e_min));
        z += c.amplitude_probs_[a];
    }
    for (auto& p : c.amplitude_probs_) p /= z;
    c.finalize();
    return c;
}

ShapedConstellation ShapedConstellation::from_amplitude_probs(
    const std::array<double, kAmplitudes>& p) {
    double z = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw std::domain_error("from_amplitude_probs: negative entry");
        z += v;
    }
    if (std::abs(z - 1.0) > 1e-9)
        throw std::domain_error("from_amplitude_probs: probabilities must sum to 1");
    ShapedConstellation c;
    c.nu_ = std::nan("");  // not from the MB family
    c.amplitude_probs_ = p;
    for (auto& v : c.amplitude_probs_) v /= z;
    c.finalize();
    return c;
}

void ShapedConstellation::finalize() {
    // unit average energy under P; signs are uniform so the axis mean is 0 and
    // E|X|^2 = 2 * sum_a P(a) a^2
    double e_axis = 0.0;
    for (int a = 0; a < kAmplitudes; ++a)
        e_axis += amplitude_probs_[a] * kUnscaledAmps[a] * kUnscaledAmps[a];
    scale_ = 1.0 / std::sqrt(2.0 * e_axis);

    for (int u = 0; u < kAxisLevels; ++u) {
        const int mag = level_magnitude(u);
        const double coord = kUnscaledAmps[mag] * scale_;
        axis_levels_[u] = level_sign(u) ? -coord : coord;
        axis_probs_[u] = 0.5 * amplitude_probs_[mag];
    }
    for (int label = 0; label < 64; ++label) {
        const int ui = label >> 3, uq = label & 7;
        points_i_[label] = axis_levels_[ui];
        points_q_[label] = axis_levels_[uq];
        probs_[label] = axis_probs_[ui] * axis_probs_[uq];
    }
}

double ShapedConstellation::entropy_bits() const { return entropy_of(probs_.data(), 64); }

void ShapedConstellation::validate() const {
    double sum = 0.0, energy = 0.0;
    for (int i = 0; i < 64; ++i) {
        if (probs_[i] < 0.0) throw std::logic_error("constellation: negative probability");
        sum += probs_[i];
        energy += probs_[i] * (points_i_[i] * points_i_[i] + points_q_[i] * points_q_[i]);
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::logic_error("constellation: probs do not sum to 1");
    if (std::abs(energy - 1.0) > 1e-9) throw std::logic_error("constellation: energy not normalized");

    // Gray property: sort axis labels by coordinate; neighbors differ in one bit
    int order[kAxisLevels];
    for (int u = 0; u < kAxisLevels; ++u) order[u] = u;
    for (int i = 0; i < kAxisLevels; ++i)
        for (int j = i + 1; j < kAxisLevels; ++j)
            if (axis_levels_[order[j]] < axis_levels_[order[i]]) std::swap(order[i], order[j]);
    for (int i = 0; i + 1 < kAxisLevels; ++i) {
        const int diff = order[i] ^ order[i + 1];
        if (__builtin_popcount(static_cast<unsigned>(diff)) != 1)
            throw std::logic_error("constellation: labeling is not Gray along the axis");
    }
}

double entropy_bits(const std::vector<double>& probs) {
    return entropy_of(probs.data(), static_cast<int>(probs.size()));
}

double solve_nu_for_entropy(double target_bits) {
    if (!(target_bits > 0.0) || target_bits > 6.0)
        throw std::domain_error("solve_nu_for_entropy: target must lie in (0, 6]");
    const double tol = 1e-6;
    if (std::abs(target_bits - 6.0) <= tol) return 0.0;

    // entropy is strictly decreasing in nu from 6 bits toward 2 (sign bits
    // stay uniform), so targets at or below 2 bits are unreachable
    double lo = 0.0, hi = 1.0;
    while (ShapedConstellation::maxwell_boltzmann(hi).entropy_bits() > target_bits) {
        hi *= 2.0;
        if (hi > 1e6)
            throw std::domain_error("solve_nu_for_entropy: target below the MB family's reach");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double h = ShapedConstellation::maxwell_boltzmann(mid).entropy_bits();
        if (std::abs(h - target_bits) <= tol) return mid;
        (h > target_bits ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

const char* preset_name(Preset p) {
    switch (p) {
        case Preset::uniform: return "uniform";
        case Preset::p1: return "P1";
        case Preset::p2: return "P2";
        case Preset::p3: return "P3";
        case Preset::p4: return "P4";
    }
    return "?";
}

std::vector<Preset> all_presets() {
    return {Preset::uniform, Preset::p1, Preset::p2, Preset::p3, Preset::p4};
}

double preset_entropy_bits(Preset p) {
    switch (p) {
        case Preset::uniform: return 6.0;
        case Preset::p1: return 5.73;
        case Preset::p2: return 5.23;
        case Preset::p3: return 4.60;
        case Preset::p4: return 4.13;
    }
    return 6.0;
}

double info_rate_bits(double entropy_bits, CodeRate code, int m) {
    return entropy_bits - (1.0 - code.value()) * m;
}

OperatingPoint operating_point(Preset p, double baud_ghz, int polarizations, CodeRate code) {
    const double c = code.value();
    if (!(c > 0.0 && c < 1.0)) throw std::domain_error("operating_point: code rate outside (0,1)");
    OperatingPoint op;
    op.preset = p;
    op.name = preset_name(p);
    op.nu = (p == Preset::uniform) ? 0.0 : solve_nu_for_entropy(preset_entropy_bits(p));
    op.entropy_bits = ShapedConstellation::maxwell_boltzmann(op.nu).entropy_bits();
    op.info_rate_bits = info_rate_bits(op.entropy_bits, code);
    op.net_rate_gbps = op.info_rate_bits * baud_ghz * polarizations;
    return op;
}

}  // namespace psqam::shaping
