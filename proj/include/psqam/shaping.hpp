#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace psqam::shaping {

inline constexpr int kBitsPerSymbol = 6;   // 64-QAM
inline constexpr int kAxisLevels = 8;      // 8-ASK per quadrature axis
inline constexpr int kAmplitudes = 4;      // |levels| before scaling: 1,3,5,7

// FEC code rate as an exact fraction (e.g. 5/6)
struct CodeRate {
    int num = 5;
    int den = 6;
    double value() const { return static_cast<double>(num) / den; }
};

// Square 64-QAM with independent per-axis probabilities and Gray labeling.
// The point whose 6-bit label is `i` sits at (points_i[i], points_q[i]);
// label bits are [b5..b0] = [sI gI1 gI0 sQ gQ1 gQ0] where s is the sign bit
// and g the 2-bit Gray code of the amplitude index. Coordinates are scaled so
// that E[|X|^2] = 1 under `probs`.
class ShapedConstellation {
  public:
    // Maxwell-Boltzmann family: P(x) proportional to exp(-nu * |x|^2) on the
    // unscaled +-{1,3,5,7}^2 grid. nu = 0 gives the uniform constellation.
    static ShapedConstellation maxwell_boltzmann(double nu);

    // arbitrary per-amplitude distribution (indexed low..high magnitude),
    // mirrored onto both signs and both axes
    static ShapedConstellation from_amplitude_probs(const std::array<double, kAmplitudes>& p);

    double nu() const { return nu_; }
    const std::array<double, 64>& probs() const { return probs_; }
    const std::array<double, 64>& points_i() const { return points_i_; }
    const std::array<double, 64>& points_q() const { return points_q_; }
    const std::array<double, kAxisLevels>& axis_levels() const { return axis_levels_; }
    const std::array<double, kAxisLevels>& axis_probs() const { return axis_probs_; }
    const std::array<double, kAmplitudes>& amplitude_probs() const { return amplitude_probs_; }
    double scale() const { return scale_; }

    // H(X) in bits; equals 2*(H(amplitudes)+1) by the product structure
    double entropy_bits() const;

    // label of the point at (sign_i, mag_i, sign_q, mag_q); signs are 0/1 with
    // 1 meaning negative, mags are amplitude indices 0..3
    static int label_of(int sign_i, int mag_i, int sign_q, int mag_q);

    // amplitude index / sign bit of one axis level index 0..7
    static int level_magnitude(int level);
    static int level_sign(int level);

    // internal consistency: probabilities sum to one, unit energy, Gray
    // adjacency along each axis. Throws std::logic_error on violation.
    void validate() const;

  private:
    ShapedConstellation() = default;
    void finalize();

    double nu_ = 0.0;
    std::array<double, kAmplitudes> amplitude_probs_{};
    std::array<double, kAxisLevels> axis_levels_{};
    std::array<double, kAxisLevels> axis_probs_{};
    std::array<double, 64> points_i_{};
    std::array<double, 64> points_q_{};
    std::array<double, 64> probs_{};
    double scale_ = 1.0;
};

// Solve for the Maxwell-Boltzmann parameter nu such that the shaped 64-QAM
// entropy H(X) equals `target_bits`. Valid targets lie in (2, 6]; unreachable
// targets throw std::domain_error. Bisection to 1e-6 bits.
double solve_nu_for_entropy(double target_bits);

// The four shaped operating points plus uniform
enum class Preset { uniform, p1, p2, p3, p4 };

struct OperatingPoint {
    Preset preset;
    std::string name;           // "uniform", "P1", ...
    double entropy_bits;        // H(P) of the 64-QAM constellation
    double nu;                  // MB parameter (0 for uniform)
    double info_rate_bits;      // R = H(P) - (1-c)*m, information bits/symbol
    double net_rate_gbps;       // R * baud * polarizations
};

// 32 GBaud, dual polarization, rate-5/6 code unless overridden
OperatingPoint operating_point(Preset p, double baud_ghz = 32.0, int polarizations = 2,
                               CodeRate code = {});

const char* preset_name(Preset p);
std::vector<Preset> all_presets();

// published entropy target of a preset (6.0 for uniform)
double preset_entropy_bits(Preset p);

// -sum p log2 p with 0 log 0 := 0, for any distribution
double entropy_bits(const std::vector<double>& probs);

// per-symbol information rate for a given entropy (Eq-style rate adaptation):
// R = H - (1-c)*m with m = 6 for 64-QAM
double info_rate_bits(double entropy_bits, CodeRate code = {}, int m = kBitsPerSymbol);

}  // namespace psqam::shaping
