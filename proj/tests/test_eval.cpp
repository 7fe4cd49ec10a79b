#include <algorithm>
#include <cmath>
#include <map>

#include <doctest.h>

#include "bleu_oracle.hpp"
#include "hrne/bleu.hpp"
#include "hrne/error.hpp"
#include "hrne/rng.hpp"
#include "hrne/vocab.hpp"

using namespace hrne;

namespace {

TokenList toks(const std::string& text) { return tokenize(text); }

}  // namespace

TEST_CASE("perfect candidates score exactly one at every order") {
    const std::vector<std::string> sentences = {
        "a man is swimming", "the quick brown fox jumps over the lazy dog", "hello world"};
    std::vector<BleuPair> pairs;
    for (const auto& s : sentences) pairs.push_back({toks(s), {toks(s)}});
    const BleuReport report = corpus_bleu(pairs, 4);
    for (int n = 1; n <= 4; ++n) CHECK(report.at(n) == 1.0);
    CHECK(report.brevity_penalty == 1.0);
}

TEST_CASE("repeated unigram clipping: a a a vs a") {
    const double score = bleu_n(toks("a a a"), {toks("a")}, 1);
    CHECK(score == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // brevity penalty is 1 because the candidate is longer than the reference
    const BleuReport report = corpus_bleu({{toks("a a a"), {toks("a")}}}, 1);
    CHECK(report.brevity_penalty == 1.0);
}

TEST_CASE("zero overlap scores zero") {
    CHECK(bleu_n(toks("x y z"), {toks("a b c")}, 1) == 0.0);
    CHECK(bleu_n(toks("x y z"), {toks("a b c")}, 4) == 0.0);
}

TEST_CASE("empty candidate scores zero, empty corpus is an error") {
    CHECK(bleu_n({}, {toks("a b")}, 2) == 0.0);
    CHECK_THROWS_AS(corpus_bleu({}, 4), ConfigError);
    CHECK_THROWS_AS(bleu_n(toks("a"), {}, 1), ConfigError);
    CHECK_THROWS_AS(corpus_bleu({{toks("a"), {toks("a")}}}, 5), ConfigError);
}

TEST_CASE("single pair corpus equals the sentence computation") {
    const TokenList cand = toks("a cat sat on the mat");
    const std::vector<TokenList> refs = {toks("the cat sat on a mat"), toks("a cat is sitting")};
    for (int n = 1; n <= 4; ++n) {
        CHECK(corpus_bleu({{cand, refs}}, n).at(n) ==
              doctest::Approx(bleu_n(cand, refs, n)).epsilon(1e-15));
    }
}

TEST_CASE("corpus order does not matter: counts are pooled") {
    std::vector<BleuPair> pairs = {
        {toks("a man rides a horse"), {toks("a man is riding a horse")}},
        {toks("a dog runs"), {toks("the dog runs fast")}},
        {toks("x y"), {toks("x y")}},
    };
    const BleuReport a = corpus_bleu(pairs, 4);
    std::reverse(pairs.begin(), pairs.end());
    const BleuReport b = corpus_bleu(pairs, 4);
    for (int n = 1; n <= 4; ++n) CHECK(a.at(n) == b.at(n));
    CHECK(a.candidate_len == b.candidate_len);
    CHECK(a.reference_len == b.reference_len);

    // pooling differs from averaging sentence scores
    double avg = 0.0;
    for (const auto& p : pairs) avg += bleu_n(p.candidate, p.references, 1) / 3.0;
    CHECK(a.at(1) != doctest::Approx(avg).epsilon(1e-6));
}

TEST_CASE("ten-sentence corpus matches the brute-force oracle exactly") {
    Rng rng(99);
    const std::vector<std::string> lexicon = {"a", "man", "dog", "runs", "plays",
                                              "guitar", "the", "is", "swimming", "fast"};
    std::vector<BleuPair> pairs;
    std::vector<bleu_oracle::Tokens> cands;
    std::vector<std::vector<bleu_oracle::Tokens>> refs;
    for (int s = 0; s < 10; ++s) {
        auto sentence = [&](std::size_t len) {
            TokenList t;
            for (std::size_t i = 0; i < len; ++i) {
                t.push_back(lexicon[static_cast<std::size_t>(rng.below(lexicon.size()))]);
            }
            return t;
        };
        BleuPair p;
        p.candidate = sentence(3 + rng.below(6));
        const std::size_t nrefs = 1 + rng.below(3);
        for (std::size_t r = 0; r < nrefs; ++r) p.references.push_back(sentence(3 + rng.below(6)));
        cands.push_back(p.candidate);
        refs.push_back(p.references);
        pairs.push_back(std::move(p));
    }

    const auto counts = bleu_oracle::count_corpus(cands, refs, 4);
    const BleuReport report = corpus_bleu(pairs, 4);

    CHECK(report.candidate_len == static_cast<std::size_t>(counts.cand_len));
    CHECK(report.reference_len == static_cast<std::size_t>(counts.ref_len));
    for (int n = 1; n <= 4; ++n) {
        // same integer counts -> identical precision ratios
        if (counts.total[n - 1] > 0) {
            CHECK(report.precision[n - 1] ==
                  static_cast<double>(counts.matched[n - 1]) /
                      static_cast<double>(counts.total[n - 1]));
        }
        CHECK(report.at(n) == doctest::Approx(bleu_oracle::score(counts, n)).epsilon(1e-12));
    }
}

TEST_CASE("scores are invariant under alphabet relabeling") {
    std::vector<BleuPair> pairs = {
        {toks("a man rides a horse"), {toks("a man is riding a horse")}},
        {toks("the dog runs"), {toks("the dog runs fast")}},
    };
    std::map<std::string, std::string> relabel;
    int next = 0;
    auto rename = [&](TokenList t) {
        for (auto& tok : t) {
            if (!relabel.count(tok)) relabel[tok] = "w" + std::to_string(next++);
            tok = relabel[tok];
        }
        return t;
    };
    std::vector<BleuPair> renamed;
    for (const auto& p : pairs) {
        BleuPair q;
        q.candidate = rename(p.candidate);
        for (const auto& r : p.references) q.references.push_back(rename(r));
        renamed.push_back(std::move(q));
    }
    const BleuReport a = corpus_bleu(pairs, 4);
    const BleuReport b = corpus_bleu(renamed, 4);
    for (int n = 1; n <= 4; ++n) CHECK(a.at(n) == b.at(n));
}

TEST_CASE("scores stay in [0, 1] and the brevity penalty in (0, 1]") {
    Rng rng(123);
    const std::vector<std::string> lexicon = {"a", "b", "c", "d", "e"};
    for (int trial = 0; trial < 200; ++trial) {
        auto sentence = [&](std::size_t len) {
            TokenList t;
            for (std::size_t i = 0; i < len; ++i) {
                t.push_back(lexicon[static_cast<std::size_t>(rng.below(lexicon.size()))]);
            }
            return t;
        };
        BleuPair p;
        p.candidate = sentence(1 + rng.below(8));
        p.references.push_back(sentence(1 + rng.below(8)));
        const BleuReport report = corpus_bleu({p}, 4);
        for (int n = 1; n <= 4; ++n) {
            CHECK(report.at(n) >= 0.0);
            CHECK(report.at(n) <= 1.0);
        }
        CHECK(report.brevity_penalty > 0.0);
        CHECK(report.brevity_penalty <= 1.0);
    }
}

TEST_CASE("short candidates pay the brevity penalty") {
    // candidate length 2, reference length 4: bp = exp(1 - 4/2)
    const BleuReport report = corpus_bleu({{toks("a b"), {toks("a b c d")}}}, 1);
    CHECK(report.brevity_penalty == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(report.at(1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("add-one smoothing lifts zero counts on tiny corpora") {
    const BleuPair p{toks("a b"), {toks("a c")}};
    CHECK(corpus_bleu({p}, 4).at(4) == 0.0);
    const double smoothed = corpus_bleu({p}, 4, true).at(4);
    CHECK(smoothed > 0.0);
    CHECK(smoothed < 1.0);
}

TEST_CASE("clipping uses the maximum reference count per n-gram") {
    // "the the the": one ref has "the" twice -> clipped count 2 of 3
    const double score =
        bleu_n(toks("the the the"), {toks("the cat the"), toks("the dog")}, 1);
    CHECK(score == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("token accuracy") {
    CHECK(token_accuracy(toks("a b c"), toks("a b c")) == 1.0);
    CHECK(token_accuracy(toks("x y z"), toks("a b c")) == 0.0);
    CHECK(token_accuracy(toks("a b c"), toks("a x c")) == doctest::Approx(2.0 / 3.0));
    CHECK(token_accuracy({}, {}) == 1.0);
    CHECK(token_accuracy(toks("a"), {}) == 0.0);
    CHECK(token_accuracy(toks("a b"), toks("a b c d")) == doctest::Approx(0.5));
    CHECK(token_accuracy(toks("a b c d"), toks("a b")) == doctest::Approx(0.5));
}
