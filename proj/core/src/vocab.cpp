#include "hrne/vocab.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "hrne/error.hpp"

namespace hrne {

namespace {

// Decode one UTF-8 codepoint; advances i. Malformed bytes pass through
// as single codepoints.
std::uint32_t next_codepoint(const std::string& s, std::size_t& i, std::size_t& bytes) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = c;
    if (c >= 0xf0) {
        extra = 3;
        cp = c & 0x07u;
    } else if (c >= 0xe0) {
        extra = 2;
        cp = c & 0x0fu;
    } else if (c >= 0xc0) {
        extra = 1;
        cp = c & 0x1fu;
    }
    if (i + extra >= s.size() + (extra == 0 ? 1 : 0)) extra = 0;
    for (std::size_t k = 1; k <= extra; ++k) {
        const unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xc0u) != 0x80u) {
            extra = k - 1;
            break;
        }
        cp = (cp << 6) | (cc & 0x3fu);
    }
    bytes = extra + 1;
    i += bytes;
    return cp;
}

bool is_punct_codepoint(std::uint32_t cp) {
    if (cp < 0x80) {
        return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') || (cp >= '[' && cp <= '`') ||
               (cp >= '{' && cp <= '~');
    }
    // common non-ASCII punctuation blocks
    if (cp == 0xa1 || cp == 0xa7 || cp == 0xab || cp == 0xb6 || cp == 0xb7 || cp == 0xbb ||
        cp == 0xbf) {
        return true;
    }
    if (cp >= 0x2010 && cp <= 0x2027) return true;   // dashes, quotes, ellipsis
    if (cp >= 0x2030 && cp <= 0x205e) return true;   // general punctuation
    if (cp >= 0x3001 && cp <= 0x3011) return true;   // CJK brackets and stops
    if (cp >= 0xff01 && cp <= 0xff0f) return true;   // fullwidth forms
    if (cp >= 0xff1a && cp <= 0xff20) return true;
    if (cp >= 0xff3b && cp <= 0xff40) return true;
    if (cp >= 0xff5b && cp <= 0xff65) return true;
    return false;
}

bool is_space_codepoint(std::uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
           cp == 0xa0 || (cp >= 0x2000 && cp <= 0x200a) || cp == 0x3000;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t start = i;
        std::size_t bytes = 0;
        const std::uint32_t cp = next_codepoint(text, i, bytes);
        if (is_space_codepoint(cp)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            continue;
        }
        if (is_punct_codepoint(cp)) continue;
        if (cp < 0x80 && cp >= 'A' && cp <= 'Z') {
            current.push_back(static_cast<char>(cp - 'A' + 'a'));
        } else {
            current.append(text, start, bytes);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Vocabulary::Vocabulary() {
    id_to_token_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
    for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
        token_to_id_[id_to_token_[i]] = static_cast<int>(i);
    }
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             std::size_t min_count) {
    if (corpus.empty()) throw ConfigError("build_vocab: empty corpus");
    std::map<std::string, std::size_t> counts;
    for (const auto& sent : corpus) {
        for (const auto& tok : sent) ++counts[tok];
    }
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [tok, cnt] : counts) {
        if (cnt >= min_count) kept.emplace_back(tok, cnt);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Vocabulary v;
    for (auto& [tok, cnt] : kept) {
        v.token_to_id_[tok] = static_cast<int>(v.id_to_token_.size());
        v.id_to_token_.push_back(tok);
    }
    return v;
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& ordered_tokens) {
    if (ordered_tokens.size() < kNumSpecials) {
        throw ConfigError("vocabulary list shorter than the reserved specials");
    }
    Vocabulary v;
    for (std::size_t i = 0; i < kNumSpecials; ++i) {
        if (ordered_tokens[i] != v.id_to_token_[i]) {
            throw ConfigError("vocabulary specials out of order: expected " + v.id_to_token_[i] +
                              " at id " + std::to_string(i) + ", got " + ordered_tokens[i]);
        }
    }
    for (std::size_t i = kNumSpecials; i < ordered_tokens.size(); ++i) {
        v.token_to_id_[ordered_tokens[i]] = static_cast<int>(i);
        v.id_to_token_.push_back(ordered_tokens[i]);
    }
    return v;
}

int Vocabulary::encode_token(const std::string& token) const {
    const auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::decode_token(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
        throw ConfigError("token id " + std::to_string(id) + " out of range for vocabulary of " +
                          std::to_string(id_to_token_.size()));
    }
    return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& tok : tokens) ids.push_back(encode_token(tok));
    return ids;
}

std::vector<int> Vocabulary::encode_wrapped(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size() + 2);
    ids.push_back(kBosId);
    for (const auto& tok : tokens) ids.push_back(encode_token(tok));
    ids.push_back(kEosId);
    return ids;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
    std::vector<std::string> tokens;
    tokens.reserve(ids.size());
    for (int id : ids) tokens.push_back(decode_token(id));
    return tokens;
}

}  // namespace hrne
