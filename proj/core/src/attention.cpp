#include "hrne/attention.hpp"

#include <cmath>

#include "hrne/error.hpp"
#include "hrne/ops.hpp"

namespace hrne {

AttentionParams::AttentionParams(Rng& rng, const std::string& prefix, std::size_t item_dim,
                                 std::size_t query_dim, std::size_t score_dim, double scale) {
    w = ParamTensor(prefix + ".w", param_init(rng, score_dim, scale));
    W_a = ParamTensor(prefix + ".W_a", param_init(rng, score_dim, item_dim, scale));
    U_a = ParamTensor(prefix + ".U_a", param_init(rng, score_dim, query_dim, scale));
    b_a = ParamTensor(prefix + ".b_a", param_init(rng, score_dim, scale));
}

std::vector<ParamTensor*> AttentionParams::tensors() { return {&w, &W_a, &U_a, &b_a}; }

Tape::NodeId attention_scores(Tape& tape, AttentionParams& params,
                              std::span<const Tape::NodeId> items, Tape::NodeId h_prev) {
    if (items.empty()) throw ShapeError("attention_scores: empty item sequence");
    std::vector<Tape::NodeId> scores;
    scores.reserve(items.size());
    for (Tape::NodeId item : items) {
        const auto pre = tape.affine_sum(params.W_a, item, params.U_a, h_prev, &params.b_a);
        scores.push_back(tape.dot_param(params.w, tape.tanh(pre)));
    }
    return tape.gather_scalars(scores);
}

Tape::NodeId attention_weights(Tape& tape, Tape::NodeId scores) { return tape.softmax(scores); }

Tape::NodeId attention_context(Tape& tape, Tape::NodeId weights,
                               std::span<const Tape::NodeId> items) {
    return tape.weighted_sum(weights, items);
}

Tape::NodeId attend(Tape& tape, AttentionParams& params, std::span<const Tape::NodeId> items,
                    Tape::NodeId h_prev) {
    const auto scores = attention_scores(tape, params, items, h_prev);
    return attention_context(tape, attention_weights(tape, scores), items);
}

namespace {

Tensor node_value(const Tape& tape, Tape::NodeId n) {
    Tensor t = Tensor::vector(tape.len(n));
    auto v = tape.value(n);
    std::copy(v.begin(), v.end(), t.data());
    return t;
}

}  // namespace

Tensor attention_scores(AttentionParams& params, const std::vector<Tensor>& items,
                        const Tensor& h_prev) {
    Tape tape;
    std::vector<Tape::NodeId> nodes;
    nodes.reserve(items.size());
    for (const Tensor& item : items) nodes.push_back(tape.input(item.span()));
    return node_value(tape, attention_scores(tape, params, nodes, tape.input(h_prev.span())));
}

Tensor attention_weights(const Tensor& scores) {
    if (scores.size() == 0) throw ShapeError("attention_weights: empty scores");
    return softmax(scores);
}

Tensor attention_context(const Tensor& weights, const std::vector<Tensor>& items) {
    if (weights.size() != items.size()) {
        throw ShapeError("attention_context: " + std::to_string(weights.size()) +
                         " weights vs " + std::to_string(items.size()) + " items");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) total += weights[i];
    if (std::fabs(total - 1.0) > 1e-6) {
        throw NumericError("attention_context: weights sum to " + std::to_string(total));
    }
    Tensor out = Tensor::vector(items[0].size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        require_shape(items[i].size() == out.size(), "attention_context: item length mismatch");
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[i] * items[i][j];
    }
    return out;
}

}  // namespace hrne
