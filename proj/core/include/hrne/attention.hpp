#pragma once

#include <string>
#include <vector>

#include "hrne/rng.hpp"
#include "hrne/tape.hpp"
#include "hrne/tensor.hpp"

namespace hrne {

// Soft attention block: relevance scores e_i = w . tanh(W_a x_i + U_a h + b_a),
// softmax weights, and the convex blend of the attended items. One bundle is
// instantiated per insertion position; parameters are never shared across
// positions.
struct AttentionParams {
    ParamTensor w, W_a, U_a, b_a;

    AttentionParams() = default;
    AttentionParams(Rng& rng, const std::string& prefix, std::size_t item_dim,
                    std::size_t query_dim, std::size_t score_dim, double scale = 0.08);

    std::size_t item_dim() const { return W_a.value.cols(); }
    std::vector<ParamTensor*> tensors();
};

Tape::NodeId attention_scores(Tape& tape, AttentionParams& params,
                              std::span<const Tape::NodeId> items, Tape::NodeId h_prev);

Tape::NodeId attention_weights(Tape& tape, Tape::NodeId scores);

Tape::NodeId attention_context(Tape& tape, Tape::NodeId weights,
                               std::span<const Tape::NodeId> items);

// scores -> weights -> context in one call.
Tape::NodeId attend(Tape& tape, AttentionParams& params, std::span<const Tape::NodeId> items,
                    Tape::NodeId h_prev);

// Value-level forms.
Tensor attention_scores(AttentionParams& params, const std::vector<Tensor>& items,
                        const Tensor& h_prev);
Tensor attention_weights(const Tensor& scores);
Tensor attention_context(const Tensor& weights, const std::vector<Tensor>& items);

}  // namespace hrne
