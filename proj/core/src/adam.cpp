#include "hrne/adam.hpp"

#include <cmath>

#include "hrne/error.hpp"

namespace hrne {

AdamState::AdamState(std::span<ParamTensor* const> params, AdamConfig cfg) : cfg_(cfg) {
    if (cfg_.lr <= 0.0) throw ConfigError("adam: learning rate must be positive");
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const ParamTensor* p : params) {
        Tensor zero = p->value;
        zero.fill(0.0);
        m_.push_back(zero);
        v_.push_back(std::move(zero));
    }
}

void AdamState::step(std::span<ParamTensor* const> params) {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
        ParamTensor& p = *params[k];
        require_shape(p.grad.same_shape(p.value), "adam: grad shape mismatch for " + p.name);
        Tensor& m = m_[k];
        Tensor& v = v_[k];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double g = p.grad[i];
            if (!std::isfinite(g)) {
                throw NumericError("adam: non-finite gradient in tensor " + p.name);
            }
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p.value[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.epsilon);
        }
    }
}

void AdamState::step(std::span<ParamTensor* const> params, std::span<const Tensor> grads) {
    require_shape(params.size() == grads.size(), "adam: parameter/gradient count mismatch");
    for (std::size_t k = 0; k < params.size(); ++k) {
        params[k]->grad = grads[k];
    }
    step(params);
}

}  // namespace hrne
