#pragma once

#include <cstddef>
#include <vector>

#include "hrne/attention.hpp"
#include "hrne/dropout.hpp"
#include "hrne/features.hpp"
#include "hrne/lstm.hpp"

namespace hrne {

enum class EncoderVariant { hrne, stacked, meanpool };

const char* variant_name(EncoderVariant v);
EncoderVariant variant_from_name(const std::string& name);

// Structural hyperparameters of the video encoder.
struct EncoderConfig {
    std::size_t input_dim = 0;   // D
    std::size_t embed_dim = 512;
    std::size_t hidden1 = 1024;  // filter LSTM
    std::size_t hidden2 = 1024;  // layer-2 LSTM
    std::size_t chunk_len = 8;   // n
    std::size_t stride = 8;      // s
    std::size_t levels = 2;      // only the two-level hierarchy is supported
    bool attn_input = false;     // position 1: over the current chunk's frames
    bool attn_chunk = false;     // position 2: over the chunk-vector sequence
    bool attn_decode = false;    // position 3: decoder over layer-2 states
    EncoderVariant variant = EncoderVariant::hrne;

    void validate() const;
};

// Dimension of the video vector this config produces.
std::size_t encoder_output_dim(const EncoderConfig& cfg);

// ---- chunking ----

struct Chunk {
    std::vector<Tensor> frames;   // exactly chunk_len entries, zero-padded
    std::vector<bool> pad_mask;   // true where the entry is padding
    std::size_t real_len() const;
};

struct ChunkSet {
    std::vector<Chunk> chunks;
    std::size_t chunk_len = 0;
    std::size_t count() const { return chunks.size(); }
};

struct ChunkWindow {
    std::size_t start;     // 0-based frame offset
    std::size_t real_len;  // frames available before padding
};

std::vector<ChunkWindow> chunk_windows(std::size_t total, std::size_t n, std::size_t s);
ChunkSet chunk_sequence(const FeatureSequence& xs, std::size_t n, std::size_t s);

// Mean of the LSTM hidden states over the non-padded steps of one chunk.
Tensor lstm_filter_chunk(LstmParams& params, const std::vector<Tensor>& chunk,
                         const std::vector<bool>& pad_mask);

// steps an input traverses to reach the encoder output:
// n + ceil(T/n) for the hierarchical encoder vs T + 1 stacked.
struct PathLength {
    std::size_t hrne_steps;
    std::size_t stacked_steps;
};
PathLength path_length(std::size_t total, std::size_t n);

// ---- full encoder ----

struct EncoderParams {
    ParamTensor embed;  // embed_dim x input_dim
    LstmParams filter;
    LstmParams layer2;
    AttentionParams attn_input;
    AttentionParams attn_chunk;

    EncoderParams() = default;
    EncoderParams(Rng& rng, const EncoderConfig& cfg, double scale = 0.08);

    std::vector<ParamTensor*> tensors(const EncoderConfig& cfg);
};

struct VideoNodes {
    Tape::NodeId v = -1;
    std::vector<Tape::NodeId> layer2_states;
};

struct VideoVector {
    Tensor v;
    std::vector<Tensor> layer2_states;
};

struct EncodeStats {
    std::size_t layer1_cells = 0;
    std::size_t layer2_cells = 0;
};

VideoNodes encode_on_tape(Tape& tape, EncoderParams& params, const EncoderConfig& cfg,
                          const FeatureSequence& xs, DropoutCtx* drop = nullptr,
                          EncodeStats* stats = nullptr);

VideoVector encode_hrne(EncoderParams& params, const EncoderConfig& cfg,
                        const FeatureSequence& xs, EncodeStats* stats = nullptr);
VideoVector encode_stacked(EncoderParams& params, const EncoderConfig& cfg,
                           const FeatureSequence& xs, EncodeStats* stats = nullptr);
VideoVector encode_meanpool(EncoderParams& params, const EncoderConfig& cfg,
                            const FeatureSequence& xs, EncodeStats* stats = nullptr);

}  // namespace hrne
