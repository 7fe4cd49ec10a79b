#pragma once

#include <vector>

#include "hrne/dropout.hpp"
#include "hrne/lstm.hpp"
#include "hrne/tape.hpp"
#include "hrne/tensor.hpp"

namespace hrne {

// E x for feature vectors.
Tensor linear_embed(const Tensor& E, const Tensor& x);
// Row lookup for token ids.
Tensor linear_embed(const Tensor& E, int token);

// Elementwise maximum of two affine pieces; ties go to the first.
Tensor maxout(const Tensor& a, const Tensor& b);

// One maxout piece of the deep output layer:
//   piece = W_z z + W_h h_t + W_e[y_prev] + b
struct DeepOutputPiece {
    ParamTensor W_z, W_h, W_e, b;
};

struct DecoderParams {
    ParamTensor embed;          // vocab x word_embed, LSTM input lookup
    LstmParams lstm;            // word_embed -> hidden
    DeepOutputPiece piece1, piece2;
    ParamTensor W_y;            // vocab x maxout_dim

    DecoderParams() = default;
    DecoderParams(Rng& rng, std::size_t vocab, std::size_t word_embed, std::size_t hidden,
                  std::size_t z_dim, std::size_t maxout_dim, double scale = 0.08);

    std::size_t vocab_size() const { return embed.value.rows(); }
    std::size_t hidden() const { return lstm.hidden(); }
    std::vector<ParamTensor*> tensors();
};

struct DecoderStepNodes {
    Tape::NodeId dist = -1;  // probability vector over the vocabulary
    LstmNodes state;
};

// Advance one step under teacher forcing or generation. z must already
// carry any dropout mask the caller wants on the encoder output.
DecoderStepNodes decoder_step_on_tape(Tape& tape, DecoderParams& params, Tape::NodeId z,
                                      int y_prev, const LstmNodes& state,
                                      DropoutCtx* drop = nullptr);

// Value-level step against a fixed video vector.
Tensor decoder_step(DecoderParams& params, const Tensor& z, int y_prev, const LstmState& state,
                    LstmState* next_state = nullptr);

// Greedy argmax generation from BOS until EOS or max_len tokens.
// The returned ids contain neither BOS nor EOS.
std::vector<int> greedy_decode(DecoderParams& params, const Tensor& z, std::size_t max_len);

// Teacher-forced negative log-likelihood over a BOS...EOS reference;
// every token after BOS is scored, EOS included. clamped reports whether
// any step's probability hit the 1e-12 log floor.
double sequence_nll(DecoderParams& params, const Tensor& z, const std::vector<int>& reference,
                    bool* clamped = nullptr);

}  // namespace hrne
