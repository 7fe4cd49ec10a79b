#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace hrne {

// Reserved token ids. PAD is kept for batching even though the decoder
// never consumes it.
constexpr int kPadId = 0;
constexpr int kBosId = 1;
constexpr int kEosId = 2;
constexpr int kUnkId = 3;
constexpr std::size_t kNumSpecials = 4;

// Lowercase, strip punctuation, split on whitespace.
std::vector<std::string> tokenize(const std::string& text);

class Vocabulary {
public:
    Vocabulary();

    // Tokens with count >= min_count, ordered by descending count then
    // lexicographic, appended after the four specials.
    static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                            std::size_t min_count = 1);

    // Reconstruct from an ordered token list (checkpoint vocabulary block).
    static Vocabulary from_tokens(const std::vector<std::string>& ordered_tokens);

    std::size_t size() const { return id_to_token_.size(); }

    int encode_token(const std::string& token) const;  // UNK for unseen
    const std::string& decode_token(int id) const;

    std::vector<int> encode(const std::vector<std::string>& tokens) const;
    // BOS + ids + EOS, the shape every training sequence takes.
    std::vector<int> encode_wrapped(const std::vector<std::string>& tokens) const;
    std::vector<std::string> decode(const std::vector<int>& ids) const;

    const std::vector<std::string>& tokens() const { return id_to_token_; }

private:
    std::unordered_map<std::string, int> token_to_id_;
    std::vector<std::string> id_to_token_;
};

}  // namespace hrne
