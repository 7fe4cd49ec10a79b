#pragma once

#include <span>
#include <vector>

#include "hrne/tensor.hpp"

namespace hrne {

struct AdamConfig {
    double lr = 2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Bias-corrected Adam. Moment tensors are laid out in the same order as
// the parameter list handed to the constructor.
class AdamState {
public:
    AdamState(std::span<ParamTensor* const> params, AdamConfig cfg = {});

    // Update from each parameter's accumulated ::grad.
    void step(std::span<ParamTensor* const> params);
    // Update from explicit gradients (same order and shapes).
    void step(std::span<ParamTensor* const> params, std::span<const Tensor> grads);

    std::size_t steps_taken() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
    std::size_t t_ = 0;
};

}  // namespace hrne
