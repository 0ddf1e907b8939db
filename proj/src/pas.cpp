#include "psqam/pas.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "psqam/kernels/kernels.hpp"
#include "psqam/rng.hpp"

namespace psqam::pas {

namespace {
inline int gray2(int a) { return a ^ (a >> 1); }   // amplitude index -> label bits
inline int igray2(int g) { return g ^ (g >> 1); }  // self-inverse at 2 bits
constexpr double kLogPriorFloor = -690.0;
}  // namespace

FrameLayout FrameLayout::standard(const fec::CodeDefinition& code) {
    FrameLayout l;
    if (code.n() % 6 != 0) throw std::logic_error("layout: codeword length not divisible by 6");
    l.symbols = code.n() / 6;
    if (code.m() != l.symbols)
        throw std::logic_error("layout: need exactly one parity bit per symbol (rate 5/6)");
    l.amplitude_bits = 4 * l.symbols;
    l.sign_data_bits = code.k() - l.amplitude_bits;
    l.parity_bits = code.m();
    if (l.sign_data_bits != l.symbols)
        throw std::logic_error("layout: sign data bits must fill one axis");
    l.dm_blocks = 4;
    if ((2 * l.symbols) % l.dm_blocks != 0)
        throw std::logic_error("layout: DM blocks must tile the amplitude stream");
    l.dm_out_len = 2 * l.symbols / l.dm_blocks;
    return l;
}

int FrameLayout::info_bits(int dm_input_bits) const { return dm_input_bits + sign_data_bits; }

double FrameLayout::info_bits_per_symbol(int dm_input_bits) const {
    return static_cast<double>(info_bits(dm_input_bits)) / symbols;
}

Session::Session(shaping::ShapedConstellation constellation,
                 std::shared_ptr<const fec::CodeDefinition> code)
    : constellation_((constellation.validate(), std::move(constellation))),
      code_(std::move(code)),
      layout_(FrameLayout::standard(*code_)),
      codebook_(ccdm::quantize_to_composition(
          std::vector<double>(constellation_.amplitude_probs().begin(),
                              constellation_.amplitude_probs().end()),
          layout_.dm_out_len)) {}

TxFrame Session::tx_chain(std::uint64_t seed, std::uint64_t frame_index) const {
    Rng rng = Rng::stream(seed, frame_index, std::uint64_t{0xDA7A});
    const int k_dm = codebook_.input_bits();

    TxFrame f;
    f.dm_bits.resize(static_cast<std::size_t>(layout_.dm_blocks) * k_dm);
    for (auto& b : f.dm_bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    f.sign_bits.resize(layout_.sign_data_bits);
    for (auto& b : f.sign_bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);

    f.amplitude_indices.resize(2 * layout_.symbols);
    for (int j = 0; j < layout_.dm_blocks; ++j) {
        std::vector<std::uint8_t> block(f.dm_bits.begin() + static_cast<std::size_t>(j) * k_dm,
                                        f.dm_bits.begin() + static_cast<std::size_t>(j + 1) * k_dm);
        const std::vector<int> amps = codebook_.encode(block);
        std::copy(amps.begin(), amps.end(), f.amplitude_indices.begin() + j * layout_.dm_out_len);
    }

    // systematic info: amplitude label bits first, then the uniform sign data
    std::vector<std::uint8_t> info(code_->k());
    for (int p = 0; p < 2 * layout_.symbols; ++p) {
        const int g = gray2(f.amplitude_indices[p]);
        info[2 * p] = static_cast<std::uint8_t>((g >> 1) & 1);
        info[2 * p + 1] = static_cast<std::uint8_t>(g & 1);
    }
    for (int s = 0; s < layout_.symbols; ++s) info[layout_.amplitude_bits + s] = f.sign_bits[s];
    f.codeword = code_->encode(info);

    // parity lands on the Q-axis signs; I-axis signs carry the data bits
    f.symbols.resize(layout_.symbols);
    const auto& pi = constellation_.points_i();
    const auto& pq = constellation_.points_q();
    for (int s = 0; s < layout_.symbols; ++s) {
        const int gi = (f.codeword[4 * s] << 1) | f.codeword[4 * s + 1];
        const int gq = (f.codeword[4 * s + 2] << 1) | f.codeword[4 * s + 3];
        const int ui = (f.codeword[layout_.amplitude_bits + s] << 2) | gi;
        const int uq = (f.codeword[layout_.amplitude_bits + layout_.symbols + s] << 2) | gq;
        const int label = (ui << 3) | uq;
        f.symbols[s] = {pi[label], pq[label]};
    }
    return f;
}

std::vector<double> Session::demap_llrs(const std::vector<std::complex<double>>& y,
                                        double noise_var) const {
    if (!(noise_var > 0.0)) throw std::domain_error("demap: noise_var must be positive");
    if (static_cast<int>(y.size()) != layout_.symbols)
        throw std::invalid_argument("demap: expected " + std::to_string(layout_.symbols) +
                                    " symbols");

    kernels::AskDemapParams params;
    params.n_levels = shaping::kAxisLevels;
    params.n_bits = 3;
    params.inv_noise_var = 1.0 / noise_var;
    params.clip = fec::DecodeOptions{}.llr_clip;
    for (int u = 0; u < shaping::kAxisLevels; ++u) {
        params.levels[u] = constellation_.axis_levels()[u];
        const double pr = constellation_.axis_probs()[u];
        params.log_prior[u] = pr > 0.0 ? std::max(std::log(pr), kLogPriorFloor) : kLogPriorFloor;
        params.labels[u] = static_cast<std::uint8_t>(u);
    }

    const int ns = layout_.symbols;
    std::vector<double> axis(2 * ns);
    for (int s = 0; s < ns; ++s) {
        axis[s] = y[s].real();
        axis[ns + s] = y[s].imag();
    }
    std::vector<double> raw(static_cast<std::size_t>(2 * ns) * 3);
    kernels::ask_llrs(axis.data(), axis.size(), params, raw.data());

    // scatter per-axis (sign, g1, g0) LLRs into codeword order
    std::vector<double> llrs(code_->n());
    for (int s = 0; s < ns; ++s) {
        llrs[layout_.amplitude_bits + s] = raw[3 * s];           // I sign (data)
        llrs[4 * s] = raw[3 * s + 1];
        llrs[4 * s + 1] = raw[3 * s + 2];
        llrs[layout_.amplitude_bits + ns + s] = raw[3 * (ns + s)];  // Q sign (parity)
        llrs[4 * s + 2] = raw[3 * (ns + s) + 1];
        llrs[4 * s + 3] = raw[3 * (ns + s) + 2];
    }
    return llrs;
}

RxFrame Session::rx_chain(const std::vector<std::complex<double>>& y, double noise_var,
                          const fec::DecodeOptions& opts) const {
    const std::vector<double> llrs = demap_llrs(y, noise_var);
    const fec::DecodeResult dec = fec::decode(*code_, llrs, opts);

    RxFrame rx;
    rx.fec_converged = dec.converged;
    rx.iterations = dec.iterations;
    rx.dm_ok = true;

    std::vector<int> amps(2 * layout_.symbols);
    for (int p = 0; p < 2 * layout_.symbols; ++p) {
        const int g = (dec.bits[2 * p] << 1) | dec.bits[2 * p + 1];
        amps[p] = igray2(g);
    }
    const int k_dm = codebook_.input_bits();
    rx.dm_bits.reserve(static_cast<std::size_t>(layout_.dm_blocks) * k_dm);
    for (int j = 0; j < layout_.dm_blocks; ++j) {
        std::vector<int> block(amps.begin() + j * layout_.dm_out_len,
                               amps.begin() + (j + 1) * layout_.dm_out_len);
        try {
            const auto bits = codebook_.decode(block);
            rx.dm_bits.insert(rx.dm_bits.end(), bits.begin(), bits.end());
        } catch (const ccdm::CompositionMismatch&) {
            rx.dm_ok = false;
            rx.dm_bits.insert(rx.dm_bits.end(), k_dm, 0);
        } catch (const ccdm::DecodeRange&) {
            rx.dm_ok = false;
            rx.dm_bits.insert(rx.dm_bits.end(), k_dm, 0);
        }
    }
    rx.sign_bits.assign(dec.bits.begin() + layout_.amplitude_bits,
                        dec.bits.begin() + layout_.amplitude_bits + layout_.sign_data_bits);
    return rx;
}

std::size_t Session::payload_bit_errors(const TxFrame& tx, const RxFrame& rx) {
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx.dm_bits.size(); ++i)
        if (tx.dm_bits[i] != rx.dm_bits[i]) ++errors;
    for (std::size_t i = 0; i < tx.sign_bits.size(); ++i)
        if (tx.sign_bits[i] != rx.sign_bits[i]) ++errors;
    return errors;
}

void Session::write_frame_csv(std::ostream& os, const TxFrame& frame) const {
    os << "# psqam frame dump\n";
    os << "symbol,amp_i,amp_q,sign_i,sign_q,re,im\n";
    char buf[128];
    for (int s = 0; s < layout_.symbols; ++s) {
        const int sign_i = frame.codeword[layout_.amplitude_bits + s];
        const int sign_q = frame.codeword[layout_.amplitude_bits + layout_.symbols + s];
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.9g,%.9g\n", s,
                      frame.amplitude_indices[2 * s], frame.amplitude_indices[2 * s + 1], sign_i,
                      sign_q, frame.symbols[s].real(), frame.symbols[s].imag());
        os << buf;
    }
}

}  // namespace psqam::pas
