#include "psqam/ccdm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace psqam::ccdm {

BigInt multiset_permutations(const std::vector<int>& counts) {
    BigInt result = 1;
    int total = 0;
    // product of binomials: choose positions for each symbol in turn
    for (int c : counts) {
        for (int i = 1; i <= c; ++i) {
            ++total;
            result *= total;
            result /= i;  // exact: result is binomial(total, i) * previous
        }
    }
    return result;
}

int Composition::length() const { return std::accumulate(counts.begin(), counts.end(), 0); }

bool Composition::matches(const std::vector<int>& sequence) const {
    std::vector<int> hist(counts.size(), 0);
    for (int a : sequence) {
        if (a < 0 || a >= static_cast<int>(counts.size())) return false;
        ++hist[a];
    }
    return hist == counts;
}

Composition quantize_to_composition(const std::vector<double>& probs, int n) {
    if (n < 1) throw std::invalid_argument("quantize_to_composition: n must be >= 1");
    const int a_size = static_cast<int>(probs.size());
    Composition comp;
    comp.counts.resize(a_size);
    std::vector<double> remainder(a_size);
    int assigned = 0;
    for (int a = 0; a < a_size; ++a) {
        const double exact = probs[a] * n;
        comp.counts[a] = static_cast<int>(std::floor(exact));
        remainder[a] = exact - comp.counts[a];
        assigned += comp.counts[a];
    }
    // hand out the leftover symbols by largest remainder, ties to lower index
    std::vector<int> order(a_size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return remainder[x] > remainder[y]; });
    for (int i = 0; i < n - assigned; ++i) ++comp.counts[order[i % a_size]];
    return comp;
}

MatcherCodebook::MatcherCodebook(Composition composition)
    : composition_(std::move(composition)) {
    n_ = composition_.length();
    total_ = multiset_permutations(composition_.counts);
    k_ = (total_ > 1) ? static_cast<int>(boost::multiprecision::msb(total_)) : 0;
}

std::vector<int> MatcherCodebook::unrank(BigInt index) const {
    std::vector<int> counts = composition_.counts;
    std::vector<int> seq(n_);
    BigInt m = total_;
    for (int pos = 0; pos < n_; ++pos) {
        const int n_rem = n_ - pos;
        for (int a = 0; a < static_cast<int>(counts.size()); ++a) {
            if (counts[a] == 0) continue;
            BigInt m_a = m * counts[a] / n_rem;  // exact by construction
            if (index < m_a) {
                seq[pos] = a;
                m = std::move(m_a);
                --counts[a];
                break;
            }
            index -= m_a;
        }
    }
    return seq;
}

BigInt MatcherCodebook::rank(const std::vector<int>& sequence) const {
    std::vector<int> counts = composition_.counts;
    BigInt m = total_, r = 0;
    for (int pos = 0; pos < n_; ++pos) {
        const int n_rem = n_ - pos;
        const int sym = sequence[pos];
        for (int a = 0; a < sym; ++a)
            if (counts[a] > 0) r += m * counts[a] / n_rem;
        m = m * counts[sym] / n_rem;
        --counts[sym];
    }
    return r;
}

std::vector<int> MatcherCodebook::encode(const std::vector<std::uint8_t>& bits) const {
    if (static_cast<int>(bits.size()) != k_)
        throw std::invalid_argument("matcher encode: expected " + std::to_string(k_) +
                                    " bits, got " + std::to_string(bits.size()));
    BigInt index = 0;
    for (std::uint8_t b : bits) {
        index <<= 1;
        if (b) index |= 1;
    }
    return unrank(std::move(index));
}

std::vector<std::uint8_t> MatcherCodebook::decode(const std::vector<int>& sequence) const {
    if (!composition_.matches(sequence))
        throw CompositionMismatch("matcher decode: sequence composition does not match codebook");
    BigInt index = rank(sequence);
    if (index >> k_ != 0)
        throw DecodeRange("matcher decode: sequence outside the codebook image");
    std::vector<std::uint8_t> bits(k_);
    for (int i = k_ - 1; i >= 0; --i) {
        bits[i] = static_cast<std::uint8_t>(index & 1);
        index >>= 1;
    }
    return bits;
}

double MatcherCodebook::rate_loss() const {
    double h = 0.0;
    for (int c : composition_.counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n_;
        h -= p * std::log2(p);
    }
    return h - static_cast<double>(k_) / n_;
}

}  // namespace psqam::ccdm
