#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "psqam/ccdm.hpp"
#include "psqam/fec.hpp"
#include "psqam/shaping.hpp"

namespace psqam::pas {

// How one FEC codeword maps onto a block of 64-QAM symbols.
//
// With n = 3456 and rate 5/6 the layout is: 576 symbols; each axis of each
// symbol is one 8-ASK level whose amplitude (2 bits, binary index) is shaped
// and whose sign bit is uniform. The 2*576 = 1152 amplitudes come from 4 DM
// blocks of 288. The 2304 amplitude bits plus 576 uniform sign bits fill the
// systematic part; the 576 parity bits land on the remaining sign positions.
struct FrameLayout {
    int symbols = 576;            // N_s
    int dm_blocks = 4;
    int dm_out_len = 288;         // amplitudes per DM block
    int amplitude_bits = 2304;    // 2 bits per axis, 2 axes per symbol
    int sign_data_bits = 576;     // uniform info bits on I-axis signs
    int parity_bits = 576;        // FEC parity on Q-axis signs

    static FrameLayout standard(const fec::CodeDefinition& code);

    // information bits entering one frame: DM input bits + uniform sign bits
    int info_bits(int dm_input_bits) const;

    // finite-length information rate in bits per 64-QAM symbol
    double info_bits_per_symbol(int dm_input_bits) const;
};

struct TxFrame {
    std::vector<std::uint8_t> dm_bits;       // the shaped payload, concatenated
    std::vector<std::uint8_t> sign_bits;     // uniform payload on I signs
    std::vector<std::uint8_t> codeword;      // full n-bit systematic codeword
    std::vector<int> amplitude_indices;      // 2*symbols, interleaved I,Q
    std::vector<std::complex<double>> symbols;
};

struct RxFrame {
    std::vector<std::uint8_t> dm_bits;       // recovered shaped payload
    std::vector<std::uint8_t> sign_bits;
    bool fec_converged = false;
    bool dm_ok = false;                      // all DM blocks inverted cleanly
    int iterations = 0;
};

// End-to-end probabilistic amplitude shaping chain for one constellation.
class Session {
  public:
    Session(shaping::ShapedConstellation constellation,
            std::shared_ptr<const fec::CodeDefinition> code);

    const shaping::ShapedConstellation& constellation() const { return constellation_; }
    const fec::CodeDefinition& code() const { return *code_; }
    const ccdm::MatcherCodebook& codebook() const { return codebook_; }
    const FrameLayout& layout() const { return layout_; }

    int dm_input_bits_per_frame() const { return layout_.dm_blocks * codebook_.input_bits(); }
    int info_bits_per_frame() const { return layout_.info_bits(dm_input_bits_per_frame()); }

    // draw payload bits, shape, encode, map; deterministic in (seed, frame)
    TxFrame tx_chain(std::uint64_t seed, std::uint64_t frame_index) const;

    // bit LLRs for one received frame, codeword order, prior-aware
    std::vector<double> demap_llrs(const std::vector<std::complex<double>>& y,
                                   double noise_var) const;

    // demap + decode + de-map amplitudes + DM inverse
    RxFrame rx_chain(const std::vector<std::complex<double>>& y, double noise_var,
                     const fec::DecodeOptions& opts = {}) const;

    // payload bit errors between a TX frame and its RX reconstruction
    static std::size_t payload_bit_errors(const TxFrame& tx, const RxFrame& rx);

    // debug dump: one CSV row per symbol (amplitudes, signs, coordinates)
    void write_frame_csv(std::ostream& os, const TxFrame& frame) const;

  private:
    shaping::ShapedConstellation constellation_;
    std::shared_ptr<const fec::CodeDefinition> code_;
    FrameLayout layout_;
    ccdm::MatcherCodebook codebook_;
};

}  // namespace psqam::pas
