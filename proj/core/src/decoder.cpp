#include "hrne/decoder.hpp"

#include <algorithm>

#include "hrne/error.hpp"
#include "hrne/ops.hpp"
#include "hrne/vocab.hpp"

namespace hrne {

Tensor linear_embed(const Tensor& E, const Tensor& x) {
    if (E.cols() != x.size()) {
        throw ShapeError("linear_embed: E is " + E.shape_str() + " but x has length " +
                         std::to_string(x.size()));
    }
    Tensor y = Tensor::vector(E.rows());
    affine_into(E, x.span(), nullptr, y.data());
    return y;
}

Tensor linear_embed(const Tensor& E, int token) {
    if (token < 0 || static_cast<std::size_t>(token) >= E.rows()) {
        throw ShapeError("linear_embed: token id " + std::to_string(token) +
                         " out of range for table " + E.shape_str());
    }
    Tensor y = Tensor::vector(E.cols());
    auto row = E.row(static_cast<std::size_t>(token));
    std::copy(row.begin(), row.end(), y.data());
    return y;
}

Tensor maxout(const Tensor& a, const Tensor& b) {
    if (a.size() != b.size()) {
        throw ShapeError("maxout: piece lengths " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
    }
    Tensor y = Tensor::vector(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] >= b[i] ? a[i] : b[i];
    return y;
}

DecoderParams::DecoderParams(Rng& rng, std::size_t vocab, std::size_t word_embed,
                             std::size_t hidden, std::size_t z_dim, std::size_t maxout_dim,
                             double scale) {
    embed = ParamTensor("dec.embed", param_init(rng, vocab, word_embed, scale));
    lstm = LstmParams(rng, "dec", word_embed, hidden, scale);
    auto piece = [&](const char* suffix) {
        DeepOutputPiece p;
        p.W_z = ParamTensor(std::string("out.W_z") + suffix,
                            param_init(rng, maxout_dim, z_dim, scale));
        p.W_h = ParamTensor(std::string("out.W_h") + suffix,
                            param_init(rng, maxout_dim, hidden, scale));
        p.W_e = ParamTensor(std::string("out.W_e") + suffix,
                            param_init(rng, vocab, maxout_dim, scale));
        p.b = ParamTensor(std::string("out.b") + suffix, param_init(rng, maxout_dim, scale));
        return p;
    };
    piece1 = piece("1");
    piece2 = piece("2");
    W_y = ParamTensor("out.W_y", param_init(rng, vocab, maxout_dim, scale));
}

std::vector<ParamTensor*> DecoderParams::tensors() {
    std::vector<ParamTensor*> out = {&embed};
    for (auto* t : lstm.tensors()) out.push_back(t);
    for (DeepOutputPiece* p : {&piece1, &piece2}) {
        out.push_back(&p->W_z);
        out.push_back(&p->W_h);
        out.push_back(&p->W_e);
        out.push_back(&p->b);
    }
    out.push_back(&W_y);
    return out;
}

DecoderStepNodes decoder_step_on_tape(Tape& tape, DecoderParams& params, Tape::NodeId z,
                                      int y_prev, const LstmNodes& state, DropoutCtx* drop) {
    if (y_prev < 0 || static_cast<std::size_t>(y_prev) >= params.vocab_size()) {
        throw ShapeError("decoder_step: token id " + std::to_string(y_prev) +
                         " out of range for vocabulary of " +
                         std::to_string(params.vocab_size()));
    }
    const auto word = maybe_dropout(tape, drop, tape.embed_row(params.embed, y_prev));
    const LstmNodes next = lstm_step(tape, params.lstm, word, state);
    const auto h_out = maybe_dropout(tape, drop, next.h);

    auto piece = [&](DeepOutputPiece& p) {
        const auto zh = tape.affine_sum(p.W_z, z, p.W_h, h_out, &p.b);
        return tape.add(zh, tape.embed_row(p.W_e, y_prev));
    };
    const auto s = tape.max2(piece(params.piece1), piece(params.piece2));
    const auto dist = tape.softmax(tape.affine(params.W_y, s, nullptr));
    return {dist, next};
}

Tensor decoder_step(DecoderParams& params, const Tensor& z, int y_prev, const LstmState& state,
                    LstmState* next_state) {
    Tape tape;
    const LstmNodes prev{tape.input(state.h.span()), tape.input(state.c.span())};
    const auto out = decoder_step_on_tape(tape, params, tape.input(z.span()), y_prev, prev);
    if (next_state) {
        *next_state = LstmState::zero(params.hidden());
        auto hv = tape.value(out.state.h);
        auto cv = tape.value(out.state.c);
        std::copy(hv.begin(), hv.end(), next_state->h.data());
        std::copy(cv.begin(), cv.end(), next_state->c.data());
    }
    Tensor dist = Tensor::vector(params.vocab_size());
    auto dv = tape.value(out.dist);
    std::copy(dv.begin(), dv.end(), dist.data());
    return dist;
}

std::vector<int> greedy_decode(DecoderParams& params, const Tensor& z, std::size_t max_len) {
    if (max_len < 1) throw ConfigError("greedy_decode: max_len must be at least 1");
    std::vector<int> ids;
    LstmState state = LstmState::zero(params.hidden());
    int prev = kBosId;
    for (std::size_t t = 0; t < max_len; ++t) {
        LstmState next = LstmState::zero(params.hidden());
        const Tensor dist = decoder_step(params, z, prev, state, &next);
        const auto it = std::max_element(dist.span().begin(), dist.span().end());
        const int best = static_cast<int>(it - dist.span().begin());
        if (best == kEosId) break;
        ids.push_back(best);
        prev = best;
        state = std::move(next);
    }
    return ids;
}

double sequence_nll(DecoderParams& params, const Tensor& z, const std::vector<int>& reference,
                    bool* clamped) {
    if (reference.size() < 2 || reference.front() != kBosId || reference.back() != kEosId) {
        throw ConfigError("sequence_nll: reference must be BOS ... EOS wrapped");
    }
    Tape tape;
    const auto zn = tape.input(z.span());
    LstmNodes state{tape.zeros(params.hidden()), tape.zeros(params.hidden())};
    std::vector<Tape::NodeId> losses;
    losses.reserve(reference.size() - 1);
    for (std::size_t t = 1; t < reference.size(); ++t) {
        const auto step = decoder_step_on_tape(tape, params, zn, reference[t - 1], state);
        losses.push_back(
            tape.neg_log_clamped(tape.pick(step.dist, static_cast<std::size_t>(reference[t]))));
        state = step.state;
    }
    const auto total = tape.add_scalars(losses);
    if (clamped) *clamped = tape.clamp_hit();
    return tape.scalar(total);
}

}  // namespace hrne
