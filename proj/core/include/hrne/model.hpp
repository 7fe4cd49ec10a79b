#pragma once

#include <string>
#include <vector>

#include "hrne/decoder.hpp"
#include "hrne/encoder.hpp"
#include "hrne/vocab.hpp"

namespace hrne {

struct ModelConfig {
    EncoderConfig enc;
    std::size_t vocab_size = 0;
    std::size_t word_embed = 512;
    std::size_t maxout_dim = 512;
    std::size_t max_len = 30;  // greedy generation cap

    void validate() const;
    std::size_t dec_hidden() const { return enc.hidden2; }
};

// Encoder, decoder and the decoder-side attention block, with a stable
// tensor ordering for the optimizer, checkpointing and gradient checks.
class CaptionModel {
public:
    CaptionModel(Rng& rng, const ModelConfig& cfg, double init_scale = 0.08);

    const ModelConfig& config() const { return cfg_; }

    // Fixed order; also stamps ParamTensor::index.
    std::vector<ParamTensor*> tensors();

    std::size_t param_count();

    void zero_grads();

    // Teacher-forced loss node for one (features, BOS...EOS reference) pair.
    Tape::NodeId caption_loss(Tape& tape, const FeatureSequence& xs,
                              const std::vector<int>& reference, DropoutCtx* drop = nullptr);

    double example_loss(const FeatureSequence& xs, const std::vector<int>& reference);

    VideoNodes encode(Tape& tape, const FeatureSequence& xs, DropoutCtx* drop = nullptr,
                      EncodeStats* stats = nullptr);

    std::vector<int> greedy_ids(const FeatureSequence& xs, std::size_t max_len = 0);
    std::vector<std::string> greedy_tokens(const FeatureSequence& xs, const Vocabulary& vocab,
                                           std::size_t max_len = 0);
    std::string greedy_caption(const FeatureSequence& xs, const Vocabulary& vocab,
                               std::size_t max_len = 0);

    EncoderParams& encoder() { return enc_; }
    DecoderParams& decoder() { return dec_; }
    AttentionParams& decode_attention() { return attn_decode_; }

private:
    // z for one decoder step: fixed video vector, or a fresh attention
    // context over the layer-2 states queried by the previous decoder
    // hidden state.
    Tape::NodeId step_context(Tape& tape, const VideoNodes& video, Tape::NodeId dec_h_prev,
                              DropoutCtx* drop);

    ModelConfig cfg_;
    EncoderParams enc_;
    DecoderParams dec_;
    AttentionParams attn_decode_;
};

}  // namespace hrne
