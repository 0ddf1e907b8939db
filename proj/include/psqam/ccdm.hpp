#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace psqam::ccdm {

using BigInt = boost::multiprecision::cpp_int;

// output sequence does not have the composition the codebook was built for
struct CompositionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// decoded index falls outside [0, 2^k)
struct DecodeRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exact number of distinct permutations of a multiset with the given counts
BigInt multiset_permutations(const std::vector<int>& counts);

// Fixed composition over a small alphabet (amplitude indices 0..A-1).
struct Composition {
    std::vector<int> counts;  // counts[a] = occurrences of symbol a

    int length() const;
    bool matches(const std::vector<int>& sequence) const;
};

// Quantize a target distribution to an n-type: floor(n*p) plus
// largest-remainder rounding, ties resolved toward the lower index.
Composition quantize_to_composition(const std::vector<double>& probs, int n);

// Constant-composition distribution matcher. Maps k input bits to one of the
// first 2^k multiset permutations of the composition, in lexicographic order
// (symbol 0 < 1 < ...), and back. Exact integer arithmetic throughout, so
// encode/decode are strict inverses for every input.
class MatcherCodebook {
  public:
    explicit MatcherCodebook(Composition composition);

    const Composition& composition() const { return composition_; }
    int output_length() const { return n_; }
    int input_bits() const { return k_; }

    // bits.size() == input_bits(), MSB first; returns n amplitude indices
    std::vector<int> encode(const std::vector<std::uint8_t>& bits) const;

    // strict inverse of encode; throws CompositionMismatch / DecodeRange
    std::vector<std::uint8_t> decode(const std::vector<int>& sequence) const;

    // rate loss in bits per output symbol: H(composition/n) - k/n
    double rate_loss() const;

  private:
    std::vector<int> unrank(BigInt index) const;
    BigInt rank(const std::vector<int>& sequence) const;

    Composition composition_;
    int n_ = 0;
    int k_ = 0;
    BigInt total_;  // multiset_permutations(counts)
};

}  // namespace psqam::ccdm
