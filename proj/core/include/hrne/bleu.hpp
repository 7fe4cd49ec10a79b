#pragma once

#include <string>
#include <vector>

namespace hrne {

using TokenList = std::vector<std::string>;

// Corpus-level BLEU: n-gram counts are pooled across all pairs before the
// precision ratio is taken (not an average of sentence scores).
struct BleuPair {
    TokenList candidate;
    std::vector<TokenList> references;
};

struct BleuReport {
    double bleu[4] = {0, 0, 0, 0};   // BLEU@1..BLEU@4
    double precision[4] = {0, 0, 0, 0};
    double brevity_penalty = 1.0;
    std::size_t candidate_len = 0;   // total candidate tokens
    std::size_t reference_len = 0;   // total effective reference tokens

    double at(int n) const { return bleu[n - 1]; }
};

// Clipped n-gram precision with geometric mean over orders 1..n and the
// brevity penalty. Clipping uses the maximum reference count per n-gram.
// smooth adds one to numerator and denominator of every order (useful on
// tiny corpora where a zero count would floor the score).
BleuReport corpus_bleu(const std::vector<BleuPair>& pairs, int max_n = 4, bool smooth = false);

double bleu_n(const TokenList& candidate, const std::vector<TokenList>& references, int n,
              bool smooth = false);

// Positional match count over max(len(candidate), len(reference));
// 1.0 when both are empty.
double token_accuracy(const TokenList& candidate, const TokenList& reference);

}  // namespace hrne
