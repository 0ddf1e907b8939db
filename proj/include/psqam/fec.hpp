#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace psqam::fec {

// QC-LDPC geometry: base matrix 4 x 24, expanded by `lift`. Rate 5/6.
struct CodeSpec {
    int lift = 144;             // circulant size Z
    std::uint64_t seed = 1;     // drives the shift-value search
};

inline constexpr int kBaseRows = 4;
inline constexpr int kBaseCols = 24;

// One expanded parity-check matrix plus everything needed for systematic
// encoding and message-passing decoding.
class CodeDefinition {
  public:
    static CodeDefinition build(const CodeSpec& spec = {});

    int n() const { return n_; }                    // codeword bits (3456)
    int k() const { return k_; }                    // info bits (2880)
    int m() const { return n_ - k_; }               // parity bits (576)
    int lift() const { return lift_; }

    // base matrix shift values; -1 marks an absent circulant
    const std::vector<int>& base_shifts() const { return base_shifts_; }

    // systematic encoding: first k bits of the result equal `info`
    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info) const;

    // true iff `word` satisfies every parity check
    bool is_codeword(const std::vector<std::uint8_t>& word) const;

    // stable identifier of the expanded matrix (FNV-1a over the sparse
    // structure); equal hashes <=> identical codes for fixed geometry
    std::uint64_t hash() const;

    // sparse text dump: one line of ascending column indices per check row
    std::string export_sparse() const;

    // row adjacency of the expanded matrix
    const std::vector<std::vector<int>>& row_cols() const { return row_cols_; }
    const std::vector<std::vector<int>>& col_rows() const { return col_rows_; }

  private:
    CodeDefinition() = default;
    void expand();

    int lift_ = 0;
    int n_ = 0;
    int k_ = 0;
    std::vector<int> base_shifts_;               // kBaseRows*kBaseCols, row-major
    std::vector<std::vector<int>> row_cols_;     // per expanded row
    std::vector<std::vector<int>> col_rows_;     // per expanded column
};

struct DecodeResult {
    std::vector<std::uint8_t> bits;  // hard decisions, length n
    bool converged = false;          // syndrome hit zero with no undecided bits
    int iterations = 0;              // message-passing iterations actually run
};

struct DecodeOptions {
    int max_iterations = 50;
    double normalization = 0.75;  // min-sum scaling factor
    double llr_clip = 24.0;       // channel and message magnitude cap
};

// Normalized min-sum with a flooding schedule. Convention: positive LLR means
// bit 0. Posteriors that are exactly zero leave the bit undecided, which
// blocks convergence even if the zero-filled hard decision satisfies the
// syndrome.
DecodeResult decode(const CodeDefinition& code, const std::vector<double>& llrs,
                    const DecodeOptions& opts = {});

}  // namespace psqam::fec
