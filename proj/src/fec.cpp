#include "psqam/fec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psqam::fec {

namespace {

constexpr int kInfoCols = 20;  // columns 20..23 hold parity circulants

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool base_present(int r, int j) {
    if (j < kInfoCols) return r != (j % kBaseRows);  // info columns: weight 3
    return r >= (j - kInfoCols);                     // parity: block lower-triangular
}

}  // namespace

CodeDefinition CodeDefinition::build(const CodeSpec& spec) {
    if (spec.lift < 2) throw std::invalid_argument("build: lift must be >= 2");
    CodeDefinition code;
    code.lift_ = spec.lift;
    code.n_ = kBaseCols * spec.lift;
    code.k_ = kInfoCols * spec.lift;
    code.base_shifts_.assign(kBaseRows * kBaseCols, -1);

    auto shift_at = [&](int r, int j) -> int& { return code.base_shifts_[r * kBaseCols + j]; };

    // diagonal parity circulants are identities so encoding is plain
    // back-substitution over the block rows
    for (int t = 0; t < kBaseRows; ++t) shift_at(t, kInfoCols + t) = 0;

    // Greedy shift assignment, row-major. A shift s at (r,j) is rejected if it
    // closes a length-4 cycle with already placed circulants:
    //   s - shift(r',j) == shift(r,j') - shift(r',j')  (mod lift)
    // for some row r' and column j' where all three are present.
    const int z = spec.lift;
    for (int r = 0; r < kBaseRows; ++r) {
        for (int j = 0; j < kBaseCols; ++j) {
            if (!base_present(r, j) || shift_at(r, j) >= 0) continue;
            const int start = static_cast<int>(
                mix64(spec.seed ^ (static_cast<std::uint64_t>(r) << 32 | j)) % z);
            bool placed = false;
            for (int probe = 0; probe < z && !placed; ++probe) {
                const int s = (start + probe) % z;
                bool ok = true;
                for (int r2 = 0; r2 < kBaseRows && ok; ++r2) {
                    if (r2 == r || shift_at(r2, j) < 0) continue;
                    const int s2 = shift_at(r2, j);
                    for (int j2 = 0; j2 < kBaseCols && ok; ++j2) {
                        if (j2 == j) continue;
                        const int a = shift_at(r, j2), b = shift_at(r2, j2);
                        if (a < 0 || b < 0) continue;
                        if (((s - s2) - (a - b)) % z == 0) ok = false;
                    }
                }
                if (ok) {
                    shift_at(r, j) = s;
                    placed = true;
                }
            }
            if (!placed)
                throw std::runtime_error("build: no 4-cycle-free shift at base entry (" +
                                         std::to_string(r) + "," + std::to_string(j) + ")");
        }
    }
    code.expand();
    return code;
}

void CodeDefinition::expand() {
    const int z = lift_;
    row_cols_.assign(kBaseRows * z, {});
    col_rows_.assign(kBaseCols * z, {});
    for (int r = 0; r < kBaseRows; ++r) {
        for (int i = 0; i < z; ++i) {
            auto& cols = row_cols_[r * z + i];
            for (int j = 0; j < kBaseCols; ++j) {
                const int s = base_shifts_[r * kBaseCols + j];
                if (s < 0) continue;
                cols.push_back(j * z + (i + s) % z);
            }
        }
    }
    for (int row = 0; row < kBaseRows * z; ++row)
        for (int col : row_cols_[row]) col_rows_[col].push_back(row);
}

std::vector<std::uint8_t> CodeDefinition::encode(const std::vector<std::uint8_t>& info) const {
    if (static_cast<int>(info.size()) != k_)
        throw std::invalid_argument("encode: expected " + std::to_string(k_) + " info bits");
    const int z = lift_;
    std::vector<std::uint8_t> word(n_, 0);
    std::copy(info.begin(), info.end(), word.begin());
    for (int r = 0; r < kBaseRows; ++r) {
        std::uint8_t* parity = word.data() + (kInfoCols + r) * z;
        for (int i = 0; i < z; ++i) {
            std::uint8_t acc = 0;
            for (int j = 0; j < kBaseCols; ++j) {
                if (j == kInfoCols + r) continue;  // the bit being solved for
                const int s = base_shifts_[r * kBaseCols + j];
                if (s < 0) continue;
                acc ^= word[j * z + (i + s) % z];
            }
            parity[i] = acc;
        }
    }
    return word;
}

bool CodeDefinition::is_codeword(const std::vector<std::uint8_t>& word) const {
    if (static_cast<int>(word.size()) != n_) return false;
    for (const auto& cols : row_cols_) {
        std::uint8_t acc = 0;
        for (int c : cols) acc ^= word[c];
        if (acc) return false;
    }
    return true;
}

std::uint64_t CodeDefinition::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto eat = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    eat(static_cast<std::uint64_t>(n_));
    eat(static_cast<std::uint64_t>(row_cols_.size()));
    for (std::size_t r = 0; r < row_cols_.size(); ++r) {
        eat(r);
        for (int c : row_cols_[r]) eat(static_cast<std::uint64_t>(c));
    }
    return h;
}

std::string CodeDefinition::export_sparse() const {
    std::ostringstream os;
    os << "# qc-ldpc parity-check matrix\n";
    os << "# n=" << n_ << " k=" << k_ << " rows=" << row_cols_.size() << " lift=" << lift_
       << "\n";
    os << "# one check row per line: ascending column indices, space-separated\n";
    for (const auto& cols : row_cols_) {
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? " " : "") << cols[i];
        os << "\n";
    }
    return os.str();
}

DecodeResult decode(const CodeDefinition& code, const std::vector<double>& llrs,
                    const DecodeOptions& opts) {
    const int n = code.n();
    if (static_cast<int>(llrs.size()) != n)
        throw std::invalid_argument("decode: expected " + std::to_string(n) + " LLRs");

    const auto& rows = code.row_cols();
    const int n_rows = static_cast<int>(rows.size());

    // flattened edge workspace
    std::vector<int> row_begin(n_rows + 1, 0);
    for (int r = 0; r < n_rows; ++r) row_begin[r + 1] = row_begin[r] + static_cast<int>(rows[r].size());
    const int n_edges = row_begin[n_rows];
    std::vector<int> edge_col(n_edges);
    for (int r = 0, e = 0; r < n_rows; ++r)
        for (int c : rows[r]) edge_col[e++] = c;

    std::vector<double> channel(n);
    for (int v = 0; v < n; ++v) channel[v] = std::clamp(llrs[v], -opts.llr_clip, opts.llr_clip);

    std::vector<double> v2c(n_edges), c2v(n_edges, 0.0), posterior(channel);
    for (int e = 0; e < n_edges; ++e) v2c[e] = channel[edge_col[e]];

    DecodeResult result;
    result.bits.assign(n, 0);

    auto harden = [&]() -> bool {  // returns true if any posterior is exactly 0
        bool undecided = false;
        for (int v = 0; v < n; ++v) {
            if (posterior[v] == 0.0) undecided = true;
            result.bits[v] = posterior[v] < 0.0 ? 1 : 0;
        }
        return undecided;
    };

    // the channel hard decision may already be a codeword
    if (!harden() && code.is_codeword(result.bits)) {
        result.converged = true;
        return result;
    }

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        // check update: normalized min-sum
        for (int r = 0; r < n_rows; ++r) {
            const int b = row_begin[r], e = row_begin[r + 1];
            double min1 = 1e300, min2 = 1e300;
            int arg_min = -1;
            int sign = 0;  // parity of negative inputs
            for (int i = b; i < e; ++i) {
                const double v = v2c[i];
                const double mag = std::fabs(v);
                if (v < 0.0) sign ^= 1;
                if (mag < min1) {
                    min2 = min1;
                    min1 = mag;
                    arg_min = i;
                } else if (mag < min2) {
                    min2 = mag;
                }
            }
            for (int i = b; i < e; ++i) {
                const double v = v2c[i];
                const int s_out = sign ^ (v < 0.0 ? 1 : 0);
                const double mag = opts.normalization * (i == arg_min ? min2 : min1);
                c2v[i] = s_out ? -mag : mag;
            }
        }
        // variable update
        std::copy(channel.begin(), channel.end(), posterior.begin());
        for (int e = 0; e < n_edges; ++e) posterior[edge_col[e]] += c2v[e];
        for (int e = 0; e < n_edges; ++e)
            v2c[e] = std::clamp(posterior[edge_col[e]] - c2v[e], -opts.llr_clip, opts.llr_clip);

        result.iterations = iter;
        if (!harden() && code.is_codeword(result.bits)) {
            result.converged = true;
            return result;
        }
    }
    return result;
}

}  // namespace psqam::fec
