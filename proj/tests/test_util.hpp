#pragma once

// shared oracles for the unit tests: small, independent implementations used
// to cross-check the library, deliberately written in the most naive way

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace testutil {

// GF(2) rank of a sparse matrix given as per-row column index lists
inline int gf2_rank(const std::vector<std::vector<int>>& rows, int n_cols) {
    const int words = (n_cols + 63) / 64;
    std::vector<std::vector<std::uint64_t>> m;
    m.reserve(rows.size());
    for (const auto& cols : rows) {
        std::vector<std::uint64_t> r(words, 0);
        for (int c : cols) r[c / 64] |= std::uint64_t{1} << (c % 64);
        m.push_back(std::move(r));
    }
    int rank = 0;
    for (int col = 0; col < n_cols && rank < static_cast<int>(m.size()); ++col) {
        const int w = col / 64;
        const std::uint64_t bit = std::uint64_t{1} << (col % 64);
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(m.size()); ++r)
            if (m[r][w] & bit) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = 0; r < static_cast<int>(m.size()); ++r) {
            if (r == rank || !(m[r][w] & bit)) continue;
            for (int k = 0; k < words; ++k) m[r][k] ^= m[rank][k];
        }
        ++rank;
    }
    return rank;
}

// all permutations of the multiset with the given counts, lexicographic order
inline std::vector<std::vector<int>> multiset_permutations_lex(const std::vector<int>& counts) {
    std::vector<int> seq;
    for (std::size_t a = 0; a < counts.size(); ++a)
        seq.insert(seq.end(), counts[a], static_cast<int>(a));
    std::vector<std::vector<int>> out;
    do {
        out.push_back(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

// every way to write n as an ordered sum of `parts` non-negative integers
inline void compositions_of(int n, int parts, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        cur.push_back(n);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= n; ++v) {
        cur.push_back(v);
        compositions_of(n - v, parts - 1, cur, out);
        cur.pop_back();
    }
}

// exact joint 64-QAM LLR for one bit position, straight 64-term sums
inline double joint_llr(const double* pi, const double* pq, const double* prob, double yi,
                        double yq, double noise_var, int bit /* 0..5, MSB first */) {
    long double s0 = 0.0L, s1 = 0.0L;
    for (int label = 0; label < 64; ++label) {
        const long double d2 = (yi - pi[label]) * (yi - pi[label]) +
                               (yq - pq[label]) * (yq - pq[label]);
        const long double v = prob[label] * std::exp(-static_cast<double>(d2) / noise_var);
        if ((label >> (5 - bit)) & 1)
            s1 += v;
        else
            s0 += v;
    }
    return static_cast<double>(std::log(s0) - std::log(s1));
}

// naive per-sample MI term: log2 of the posterior of the transmitted point
inline double naive_mi_term(const double* pi, const double* pq, const double* logp, double yi,
                            double yq, double inv_nv, int tx, int n_points) {
    long double denom = 0.0L;
    long double num = 0.0L;
    for (int j = 0; j < n_points; ++j) {
        const long double d2 =
            (yi - pi[j]) * (yi - pi[j]) + (yq - pq[j]) * (yq - pq[j]);
        const long double v = std::exp(static_cast<double>(logp[j] - d2 * inv_nv));
        denom += v;
        if (j == tx) num = v;
    }
    return static_cast<double>((std::log(num) - std::log(denom)) / 0.69314718055994530942L);
}

}  // namespace testutil
