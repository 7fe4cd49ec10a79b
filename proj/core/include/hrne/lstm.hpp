#pragma once

#include <string>
#include <vector>

#include "hrne/rng.hpp"
#include "hrne/tape.hpp"
#include "hrne/tensor.hpp"

namespace hrne {

// Vanilla recurrent cell, h_t = tanh(W_hx x_t + W_hh h_{t-1}), z_t = W_zh h_t.
struct RnnParams {
    ParamTensor W_hx, W_hh, W_zh;

    RnnParams() = default;
    RnnParams(Rng& rng, const std::string& prefix, std::size_t input_dim, std::size_t hidden,
              std::size_t output_dim, double scale = 0.08);

    std::vector<ParamTensor*> tensors();
};

// One LSTM unit: input, forget and output gates plus the candidate
// transform, each with its own input matrix, recurrent matrix and bias.
struct LstmParams {
    ParamTensor W_ix, W_ih, b_i;
    ParamTensor W_fx, W_fh, b_f;
    ParamTensor W_ox, W_oh, b_o;
    ParamTensor W_gx, W_gh, b_g;

    LstmParams() = default;
    // forget_bias shifts b_f at init; +1 keeps the memory path open early.
    LstmParams(Rng& rng, const std::string& prefix, std::size_t input_dim, std::size_t hidden,
               double scale = 0.08, double forget_bias = 1.0);

    std::size_t hidden() const { return b_i.value.size(); }
    std::size_t input_dim() const { return W_ix.value.cols(); }
    std::vector<ParamTensor*> tensors();
};

struct LstmState {
    Tensor h, c;

    static LstmState zero(std::size_t hidden) {
        return {Tensor::vector(hidden), Tensor::vector(hidden)};
    }
};

// Tape node pair for one step's (h, c).
struct LstmNodes {
    Tape::NodeId h = -1;
    Tape::NodeId c = -1;
};

// state' from one cell evaluation; increments tape.cell_evals.
LstmNodes lstm_step(Tape& tape, LstmParams& params, Tape::NodeId x, const LstmNodes& prev);

// Full unrolled pass; states[t] is the state after consuming xs[t].
// The tape itself is the record that backward() replays.
std::vector<LstmNodes> lstm_forward(Tape& tape, LstmParams& params,
                                    std::span<const Tape::NodeId> xs, const LstmNodes& init);

struct RnnStepNodes {
    Tape::NodeId h = -1;
    Tape::NodeId z = -1;
};

RnnStepNodes rnn_step(Tape& tape, RnnParams& params, Tape::NodeId x, Tape::NodeId h_prev);

// Value-level conveniences (each runs a private tape).
LstmState lstm_step(LstmParams& params, const Tensor& x, const LstmState& prev);
std::pair<Tensor, Tensor> rnn_step(RnnParams& params, const Tensor& x, const Tensor& h_prev);
std::vector<LstmState> lstm_forward(LstmParams& params, const std::vector<Tensor>& xs,
                                    const LstmState& init);

}  // namespace hrne
