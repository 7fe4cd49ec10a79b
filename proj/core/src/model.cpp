#include "hrne/model.hpp"

#include <algorithm>

#include "hrne/error.hpp"

namespace hrne {

void ModelConfig::validate() const {
    enc.validate();
    if (vocab_size <= kNumSpecials) {
        throw ConfigError("model: vocabulary must be larger than the " +
                          std::to_string(kNumSpecials) + " reserved specials");
    }
    if (word_embed == 0 || maxout_dim == 0) {
        throw ConfigError("model: word_embed and maxout_dim must be positive");
    }
    if (dec_hidden() == 0) throw ConfigError("model: decoder hidden size must be positive");
    if (max_len == 0) throw ConfigError("model: max_len must be positive");
}

CaptionModel::CaptionModel(Rng& rng, const ModelConfig& cfg, double init_scale) : cfg_(cfg) {
    cfg_.validate();
    enc_ = EncoderParams(rng, cfg_.enc, init_scale);
    dec_ = DecoderParams(rng, cfg_.vocab_size, cfg_.word_embed, cfg_.dec_hidden(),
                         encoder_output_dim(cfg_.enc), cfg_.maxout_dim, init_scale);
    if (cfg_.enc.attn_decode) {
        const std::size_t item_dim = encoder_output_dim(cfg_.enc);
        attn_decode_ = AttentionParams(rng, "attn3", item_dim, cfg_.dec_hidden(), item_dim,
                                       init_scale);
    }
}

std::vector<ParamTensor*> CaptionModel::tensors() {
    std::vector<ParamTensor*> out = enc_.tensors(cfg_.enc);
    if (cfg_.enc.attn_decode) {
        for (auto* t : attn_decode_.tensors()) out.push_back(t);
    }
    for (auto* t : dec_.tensors()) out.push_back(t);
    for (std::size_t i = 0; i < out.size(); ++i) out[i]->index = static_cast<int>(i);
    return out;
}

std::size_t CaptionModel::param_count() {
    std::size_t n = 0;
    for (auto* t : tensors()) n += t->size();
    return n;
}

void CaptionModel::zero_grads() {
    for (auto* t : tensors()) t->zero_grad();
}

VideoNodes CaptionModel::encode(Tape& tape, const FeatureSequence& xs, DropoutCtx* drop,
                                EncodeStats* stats) {
    return encode_on_tape(tape, enc_, cfg_.enc, xs, drop, stats);
}

Tape::NodeId CaptionModel::step_context(Tape& tape, const VideoNodes& video,
                                        Tape::NodeId dec_h_prev, DropoutCtx* drop) {
    Tape::NodeId z = video.v;
    if (cfg_.enc.attn_decode) {
        z = attend(tape, attn_decode_, video.layer2_states, dec_h_prev);
    }
    return maybe_dropout(tape, drop, z);
}

Tape::NodeId CaptionModel::caption_loss(Tape& tape, const FeatureSequence& xs,
                                        const std::vector<int>& reference, DropoutCtx* drop) {
    if (reference.size() < 2 || reference.front() != kBosId || reference.back() != kEosId) {
        throw ConfigError("caption_loss: reference must be BOS ... EOS wrapped");
    }
    const VideoNodes video = encode(tape, xs, drop);
    LstmNodes state{tape.zeros(cfg_.dec_hidden()), tape.zeros(cfg_.dec_hidden())};
    std::vector<Tape::NodeId> losses;
    losses.reserve(reference.size() - 1);
    for (std::size_t t = 1; t < reference.size(); ++t) {
        const auto z = step_context(tape, video, state.h, drop);
        const auto step = decoder_step_on_tape(tape, dec_, z, reference[t - 1], state, drop);
        losses.push_back(
            tape.neg_log_clamped(tape.pick(step.dist, static_cast<std::size_t>(reference[t]))));
        state = step.state;
    }
    return tape.add_scalars(losses);
}

double CaptionModel::example_loss(const FeatureSequence& xs, const std::vector<int>& reference) {
    Tape tape;
    return tape.scalar(caption_loss(tape, xs, reference));
}

std::vector<int> CaptionModel::greedy_ids(const FeatureSequence& xs, std::size_t max_len) {
    if (max_len == 0) max_len = cfg_.max_len;
    Tape tape;
    const VideoNodes video = encode(tape, xs);
    LstmNodes state{tape.zeros(cfg_.dec_hidden()), tape.zeros(cfg_.dec_hidden())};
    std::vector<int> ids;
    int prev = kBosId;
    for (std::size_t t = 0; t < max_len; ++t) {
        const auto z = step_context(tape, video, state.h, nullptr);
        const auto step = decoder_step_on_tape(tape, dec_, z, prev, state, nullptr);
        const auto dist = tape.value(step.dist);
        const auto it = std::max_element(dist.begin(), dist.end());
        const int best = static_cast<int>(it - dist.begin());
        if (best == kEosId) break;
        ids.push_back(best);
        prev = best;
        state = step.state;
    }
    return ids;
}

std::vector<std::string> CaptionModel::greedy_tokens(const FeatureSequence& xs,
                                                     const Vocabulary& vocab,
                                                     std::size_t max_len) {
    return vocab.decode(greedy_ids(xs, max_len));
}

std::string CaptionModel::greedy_caption(const FeatureSequence& xs, const Vocabulary& vocab,
                                         std::size_t max_len) {
    const auto tokens = greedy_tokens(xs, vocab, max_len);
    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) text += ' ';
        text += tokens[i];
    }
    return text;
}

}  // namespace hrne
