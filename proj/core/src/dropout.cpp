#include "hrne/dropout.hpp"

#include "hrne/error.hpp"

namespace hrne {

Tensor dropout_apply(Rng& rng, double rate, const Tensor& v, DropoutMode mode) {
    if (rate < 0.0 || rate >= 1.0) {
        throw ConfigError("dropout rate must be in [0, 1), got " + std::to_string(rate));
    }
    if (mode == DropoutMode::infer || rate == 0.0) return v;
    Tensor out = v;
    const double scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = rng.uniform01() < rate ? 0.0 : out[i] * scale;
    }
    return out;
}

}  // namespace hrne
