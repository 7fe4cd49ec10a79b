#include "hrne/lstm.hpp"

#include "hrne/error.hpp"
#include "hrne/ops.hpp"

namespace hrne {

RnnParams::RnnParams(Rng& rng, const std::string& prefix, std::size_t input_dim,
                     std::size_t hidden, std::size_t output_dim, double scale) {
    W_hx = ParamTensor(prefix + ".W_hx", param_init(rng, hidden, input_dim, scale));
    W_hh = ParamTensor(prefix + ".W_hh", param_init(rng, hidden, hidden, scale));
    W_zh = ParamTensor(prefix + ".W_zh", param_init(rng, output_dim, hidden, scale));
}

std::vector<ParamTensor*> RnnParams::tensors() { return {&W_hx, &W_hh, &W_zh}; }

LstmParams::LstmParams(Rng& rng, const std::string& prefix, std::size_t input_dim,
                       std::size_t hidden, double scale, double forget_bias) {
    auto mat = [&](const char* name, std::size_t r, std::size_t c) {
        return ParamTensor(prefix + "." + name, param_init(rng, r, c, scale));
    };
    auto vec = [&](const char* name) {
        return ParamTensor(prefix + "." + name, param_init(rng, hidden, scale));
    };
    W_ix = mat("W_ix", hidden, input_dim);
    W_ih = mat("W_ih", hidden, hidden);
    b_i = vec("b_i");
    W_fx = mat("W_fx", hidden, input_dim);
    W_fh = mat("W_fh", hidden, hidden);
    b_f = vec("b_f");
    W_ox = mat("W_ox", hidden, input_dim);
    W_oh = mat("W_oh", hidden, hidden);
    b_o = vec("b_o");
    W_gx = mat("W_gx", hidden, input_dim);
    W_gh = mat("W_gh", hidden, hidden);
    b_g = vec("b_g");
    for (std::size_t j = 0; j < hidden; ++j) {
        b_f.value[j] = static_cast<double>(static_cast<float>(b_f.value[j] + forget_bias));
    }
}

std::vector<ParamTensor*> LstmParams::tensors() {
    return {&W_ix, &W_ih, &b_i, &W_fx, &W_fh, &b_f, &W_ox, &W_oh, &b_o, &W_gx, &W_gh, &b_g};
}

LstmNodes lstm_step(Tape& tape, LstmParams& params, Tape::NodeId x, const LstmNodes& prev) {
    const auto i = tape.sigmoid(tape.affine_sum(params.W_ix, x, params.W_ih, prev.h, &params.b_i));
    const auto f = tape.sigmoid(tape.affine_sum(params.W_fx, x, params.W_fh, prev.h, &params.b_f));
    const auto o = tape.sigmoid(tape.affine_sum(params.W_ox, x, params.W_oh, prev.h, &params.b_o));
    const auto g = tape.tanh(tape.affine_sum(params.W_gx, x, params.W_gh, prev.h, &params.b_g));
    const auto c = tape.add(tape.mul(f, prev.c), tape.mul(i, g));
    const auto h = tape.mul(o, tape.tanh(c));
    ++tape.cell_evals;
    return {h, c};
}

std::vector<LstmNodes> lstm_forward(Tape& tape, LstmParams& params,
                                    std::span<const Tape::NodeId> xs, const LstmNodes& init) {
    std::vector<LstmNodes> states;
    states.reserve(xs.size());
    LstmNodes prev = init;
    for (Tape::NodeId x : xs) {
        prev = lstm_step(tape, params, x, prev);
        states.push_back(prev);
    }
    return states;
}

RnnStepNodes rnn_step(Tape& tape, RnnParams& params, Tape::NodeId x, Tape::NodeId h_prev) {
    const auto h = tape.tanh(tape.affine_sum(params.W_hx, x, params.W_hh, h_prev, nullptr));
    const auto z = tape.affine(params.W_zh, h, nullptr);
    return {h, z};
}

LstmState lstm_step(LstmParams& params, const Tensor& x, const LstmState& prev) {
    Tape tape;
    LstmNodes init{tape.input(prev.h.span()), tape.input(prev.c.span())};
    const LstmNodes out = lstm_step(tape, params, tape.input(x.span()), init);
    LstmState next = LstmState::zero(params.hidden());
    auto hv = tape.value(out.h);
    auto cv = tape.value(out.c);
    std::copy(hv.begin(), hv.end(), next.h.data());
    std::copy(cv.begin(), cv.end(), next.c.data());
    check_finite(next.c.span(), "lstm_step cell");
    return next;
}

std::pair<Tensor, Tensor> rnn_step(RnnParams& params, const Tensor& x, const Tensor& h_prev) {
    Tape tape;
    const RnnStepNodes out = rnn_step(tape, params, tape.input(x.span()), tape.input(h_prev.span()));
    Tensor h = Tensor::vector(tape.len(out.h));
    Tensor z = Tensor::vector(tape.len(out.z));
    auto hv = tape.value(out.h);
    auto zv = tape.value(out.z);
    std::copy(hv.begin(), hv.end(), h.data());
    std::copy(zv.begin(), zv.end(), z.data());
    return {std::move(h), std::move(z)};
}

std::vector<LstmState> lstm_forward(LstmParams& params, const std::vector<Tensor>& xs,
                                    const LstmState& init) {
    Tape tape;
    std::vector<Tape::NodeId> inputs;
    inputs.reserve(xs.size());
    for (const Tensor& x : xs) {
        if (x.size() != params.input_dim()) {
            throw ShapeError("lstm_forward: input length " + std::to_string(x.size()) +
                             " vs expected " + std::to_string(params.input_dim()));
        }
        inputs.push_back(tape.input(x.span()));
    }
    LstmNodes start{tape.input(init.h.span()), tape.input(init.c.span())};
    const auto nodes = lstm_forward(tape, params, inputs, start);
    std::vector<LstmState> states;
    states.reserve(nodes.size());
    for (const LstmNodes& n : nodes) {
        LstmState s = LstmState::zero(params.hidden());
        auto hv = tape.value(n.h);
        auto cv = tape.value(n.c);
        std::copy(hv.begin(), hv.end(), s.h.data());
        std::copy(cv.begin(), cv.end(), s.c.data());
        states.push_back(std::move(s));
    }
    return states;
}

}  // namespace hrne
