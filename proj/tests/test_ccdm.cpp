#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "psqam/ccdm.hpp"
#include "psqam/rng.hpp"
#include "psqam/shaping.hpp"
#include "test_util.hpp"

using namespace psqam;
using ccdm::Composition;
using ccdm::MatcherCodebook;

namespace {

std::vector<std::uint8_t> bits_of(std::uint64_t v, int k) {
    std::vector<std::uint8_t> bits(k);
    for (int i = 0; i < k; ++i) bits[i] = (v >> (k - 1 - i)) & 1;
    return bits;
}

}  // namespace

TEST_CASE("quantizer: exact targets") {
    auto c = ccdm::quantize_to_composition({0.25, 0.25, 0.25, 0.25}, 8);
    CHECK(c.counts == std::vector<int>{2, 2, 2, 2});
    c = ccdm::quantize_to_composition({0.7, 0.1, 0.1, 0.1}, 10);
    CHECK(c.counts == std::vector<int>{7, 1, 1, 1});
}

TEST_CASE("quantizer: largest remainder result is a max-deviation minimizer") {
    const std::vector<double> target{0.4, 0.3, 0.2, 0.1};
    const int n = 7;
    const auto got = ccdm::quantize_to_composition(target, n);
    REQUIRE(got.length() == n);

    std::vector<std::vector<int>> all;
    std::vector<int> cur;
    testutil::compositions_of(n, 4, cur, all);
    double best = 1e9;
    for (const auto& cand : all) {
        double dev = 0.0;
        for (int a = 0; a < 4; ++a)
            dev = std::max(dev, std::abs(static_cast<double>(cand[a]) / n - target[a]));
        best = std::min(best, dev);
    }
    double got_dev = 0.0;
    for (int a = 0; a < 4; ++a)
        got_dev = std::max(got_dev, std::abs(static_cast<double>(got.counts[a]) / n - target[a]));
    CHECK(got_dev == doctest::Approx(best).epsilon(1e-12));
    CHECK(got.counts == std::vector<int>{3, 2, 1, 1});
}

TEST_CASE("quantizer: ties break toward the lower amplitude index") {
    // remainders 0.5 everywhere: the two leftovers go to indices 0 and 1
    const auto c = ccdm::quantize_to_composition({0.25, 0.25, 0.25, 0.25}, 10);
    CHECK(c.counts == std::vector<int>{3, 3, 2, 2});
}

TEST_CASE("multinomial counts and input bits") {
    CHECK(ccdm::multiset_permutations({2, 2, 2, 2}) == 2520);
    const MatcherCodebook cb(Composition{{2, 2, 2, 2}});
    CHECK(cb.input_bits() == 11);  // floor(log2 2520)
    CHECK(cb.rate_loss() == doctest::Approx(2.0 - 11.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("lexicographic enumeration matches the brute-force oracle") {
    const std::vector<std::vector<int>> cases = {{2, 2}, {1, 1}, {3, 2, 1}, {1, 2, 3}, {2, 0, 2}};
    for (const auto& counts : cases) {
        const auto oracle = testutil::multiset_permutations_lex(counts);
        const MatcherCodebook cb(Composition{counts});
        CHECK(ccdm::multiset_permutations(counts) == oracle.size());
        const std::uint64_t limit = std::uint64_t{1} << cb.input_bits();
        for (std::uint64_t v = 0; v < limit; ++v) {
            const auto seq = cb.encode(bits_of(v, cb.input_bits()));
            CHECK(seq == oracle[v]);  // encode(i) is the i-th lex sequence
        }
    }
}

TEST_CASE("degenerate codebooks") {
    const MatcherCodebook cb(Composition{{5, 0, 0, 0}});
    CHECK(cb.input_bits() == 0);
    CHECK(cb.encode({}) == std::vector<int>{0, 0, 0, 0, 0});
    CHECK(cb.decode({0, 0, 0, 0, 0}).empty());

    const MatcherCodebook pair(Composition{{1, 1}});
    CHECK(pair.input_bits() == 1);
    CHECK(pair.encode({0}) == std::vector<int>{0, 1});
    CHECK(pair.encode({1}) == std::vector<int>{1, 0});
}

TEST_CASE("exhaustive roundtrip and injectivity at small n") {
    const std::vector<std::vector<int>> cases = {{2, 2},       {3, 3},       {4, 2, 1},
                                                 {2, 2, 2, 2}, {5, 4, 2, 1}, {1, 1, 1, 1}};
    for (const auto& counts : cases) {
        const MatcherCodebook cb(Composition{counts});
        std::set<std::vector<int>> images;
        const std::uint64_t limit = std::uint64_t{1} << cb.input_bits();
        for (std::uint64_t v = 0; v < limit; ++v) {
            const auto bits = bits_of(v, cb.input_bits());
            const auto seq = cb.encode(bits);
            CHECK(cb.composition().matches(seq));  // constant composition
            images.insert(seq);
            CHECK(cb.decode(seq) == bits);  // strict inverse
        }
        CHECK(images.size() == limit);  // injective
    }
}

TEST_CASE("randomized roundtrip at n = 96") {
    const auto c = shaping::ShapedConstellation::maxwell_boltzmann(0.0522);
    const auto& ap = c.amplitude_probs();
    const auto comp =
        ccdm::quantize_to_composition(std::vector<double>(ap.begin(), ap.end()), 96);
    const MatcherCodebook cb(comp);
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::uint8_t> bits(cb.input_bits());
        for (auto& b : bits) b = rng.next_u64() & 1;
        const auto seq = cb.encode(bits);
        CHECK(cb.composition().matches(seq));
        CHECK(cb.decode(seq) == bits);
    }
}

TEST_CASE("error signalling") {
    const MatcherCodebook cb(Composition{{2, 2}});
    CHECK_THROWS_AS(cb.decode({0, 0, 0, 1}), ccdm::CompositionMismatch);   // histogram (3,1)
    CHECK_THROWS_AS(cb.decode({1, 0, 1, 0}), ccdm::DecodeRange);           // lex index 4 >= 2^2
    CHECK_THROWS_AS(cb.decode({1, 1, 0, 0}), ccdm::DecodeRange);           // lex index 5
    CHECK_THROWS_AS(cb.encode({0, 0, 0}), std::invalid_argument);          // wrong bit count
}

TEST_CASE("rate loss shrinks with block length") {
    const auto c = shaping::ShapedConstellation::maxwell_boltzmann(
        shaping::solve_nu_for_entropy(5.23));
    const auto& ap = c.amplitude_probs();
    const std::vector<double> target(ap.begin(), ap.end());
    double prev = 1e9;
    for (int n : {16, 64, 256, 1024}) {
        const MatcherCodebook cb(ccdm::quantize_to_composition(target, n));
        const double loss = cb.rate_loss();
        CHECK(loss >= 0.0);
        CHECK(loss < prev);
        prev = loss;
    }
}

TEST_CASE("k never exceeds the composition entropy") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> counts(4);
        for (auto& v : counts) v = static_cast<int>(rng.next_u64() % 12);
        if (Composition{counts}.length() == 0) continue;
        const MatcherCodebook cb(Composition{counts});
        const int n = cb.output_length();
        double h = 0.0;
        for (int v : counts)
            if (v > 0) h -= (static_cast<double>(v) / n) * std::log2(static_cast<double>(v) / n);
        CHECK(static_cast<double>(cb.input_bits()) <= n * h + 1e-9);
    }
}

TEST_CASE("encode is deterministic") {
    const MatcherCodebook cb(Composition{{40, 30, 20, 6}});
    std::vector<std::uint8_t> bits(cb.input_bits());
    Rng rng(5);
    for (auto& b : bits) b = rng.next_u64() & 1;
    CHECK(cb.encode(bits) == cb.encode(bits));
}
