#include "hrne/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "hrne/error.hpp"

namespace hrne {

namespace {

// n-grams keyed by their tokens joined with an unlikely separator byte
std::map<std::string, std::size_t> ngram_counts(const TokenList& tokens, int n) {
    std::map<std::string, std::size_t> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (int j = 0; j < n; ++j) {
            if (j) key += '\x1f';
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

// closest reference length to the candidate; ties go to the shorter
std::size_t effective_ref_len(std::size_t cand_len, const std::vector<TokenList>& refs) {
    std::size_t best = refs[0].size();
    for (const auto& r : refs) {
        const auto d = [&](std::size_t len) {
            return len > cand_len ? len - cand_len : cand_len - len;
        };
        if (d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best)) {
            best = r.size();
        }
    }
    return best;
}

}  // namespace

BleuReport corpus_bleu(const std::vector<BleuPair>& pairs, int max_n, bool smooth) {
    if (pairs.empty()) throw ConfigError("corpus_bleu: empty corpus");
    if (max_n < 1 || max_n > 4) throw ConfigError("corpus_bleu: order must be in 1..4");
    for (const auto& p : pairs) {
        if (p.references.empty()) throw ConfigError("corpus_bleu: pair without references");
    }

    BleuReport report;
    std::size_t matched[4] = {0, 0, 0, 0};
    std::size_t total[4] = {0, 0, 0, 0};

    for (const auto& pair : pairs) {
        report.candidate_len += pair.candidate.size();
        report.reference_len += effective_ref_len(pair.candidate.size(), pair.references);
        for (int n = 1; n <= max_n; ++n) {
            const auto cand = ngram_counts(pair.candidate, n);
            std::map<std::string, std::size_t> ref_max;
            for (const auto& ref : pair.references) {
                for (const auto& [gram, cnt] : ngram_counts(ref, n)) {
                    ref_max[gram] = std::max(ref_max[gram], cnt);
                }
            }
            for (const auto& [gram, cnt] : cand) {
                const auto it = ref_max.find(gram);
                matched[n - 1] += std::min(cnt, it == ref_max.end() ? 0 : it->second);
                total[n - 1] += cnt;
            }
        }
    }

    report.brevity_penalty =
        report.candidate_len >= report.reference_len || report.candidate_len == 0
            ? 1.0
            : std::exp(1.0 - static_cast<double>(report.reference_len) /
                                 static_cast<double>(report.candidate_len));

    for (int n = 1; n <= max_n; ++n) {
        const double num = static_cast<double>(matched[n - 1]) + (smooth ? 1.0 : 0.0);
        const double den = static_cast<double>(total[n - 1]) + (smooth ? 1.0 : 0.0);
        report.precision[n - 1] = den > 0.0 ? num / den : 0.0;

        double log_sum = 0.0;
        bool zero = false;
        for (int k = 1; k <= n; ++k) {
            if (report.precision[k - 1] <= 0.0) {
                zero = true;
                break;
            }
            log_sum += std::log(report.precision[k - 1]);
        }
        report.bleu[n - 1] =
            zero ? 0.0 : report.brevity_penalty * std::exp(log_sum / static_cast<double>(n));
    }
    return report;
}

double bleu_n(const TokenList& candidate, const std::vector<TokenList>& references, int n,
              bool smooth) {
    if (references.empty()) throw ConfigError("bleu_n: at least one reference required");
    if (candidate.empty()) return 0.0;
    return corpus_bleu({{candidate, references}}, n, smooth).at(n);
}

double token_accuracy(const TokenList& candidate, const TokenList& reference) {
    if (candidate.empty() && reference.empty()) return 1.0;
    const std::size_t upto = std::min(candidate.size(), reference.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < upto; ++i) hits += candidate[i] == reference[i] ? 1 : 0;
    return static_cast<double>(hits) /
           static_cast<double>(std::max(candidate.size(), reference.size()));
}

}  // namespace hrne
