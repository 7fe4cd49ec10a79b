#pragma once

#include <functional>
#include <vector>

#include "hrne/rng.hpp"
#include "hrne/tape.hpp"
#include "hrne/tensor.hpp"

namespace hrne {

enum class DropoutMode { train, infer };

// Inverted dropout: each coordinate is zeroed with probability rate and
// survivors are scaled by 1/(1-rate), so inference is the identity.
Tensor dropout_apply(Rng& rng, double rate, const Tensor& v, DropoutMode mode);

// Carried through a training forward pass. Masks are applied only at LSTM
// input and output boundaries - never on the h/c paths between steps.
// mask_override lets structural tests force specific masks.
struct DropoutCtx {
    double rate = 0.0;
    Rng* rng = nullptr;
    std::function<std::vector<double>(std::size_t)> mask_override;

    bool active() const { return mask_override || (rate > 0.0 && rng != nullptr); }

    std::vector<double> mask(std::size_t len) {
        if (mask_override) return mask_override(len);
        std::vector<double> m(len);
        const double keep = 1.0 - rate;
        const double scale = 1.0 / keep;
        for (std::size_t i = 0; i < len; ++i) {
            m[i] = rng->uniform01() < rate ? 0.0 : scale;
        }
        return m;
    }
};

inline Tape::NodeId maybe_dropout(Tape& tape, DropoutCtx* ctx, Tape::NodeId x) {
    if (!ctx || !ctx->active()) return x;
    const auto m = ctx->mask(tape.len(x));
    return tape.mul_mask(x, m);
}

}  // namespace hrne
