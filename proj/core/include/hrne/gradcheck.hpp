#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hrne/tensor.hpp"

namespace hrne {

// Central-difference gradient estimate, one Tensor per parameter:
//   (f(theta + eps e) - f(theta - eps e)) / (2 eps)  per scalar entry.
// f must be a pure, deterministic function of the parameter values.
std::vector<Tensor> finite_diff_grad(const std::function<double()>& f,
                                     std::span<ParamTensor* const> params, double eps = 1e-4);

// max over entries of |a - b| / max(|a|, |b|, 1e-8)
double max_rel_error(const Tensor& a, const Tensor& b);

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_tensor;
    bool passed(double tol) const { return max_rel_err <= tol; }
};

// Runs f once more per perturbation and compares against the analytic
// gradients already accumulated in each ParamTensor::grad.
GradCheckReport compare_gradients(const std::function<double()>& f,
                                  std::span<ParamTensor* const> params, double eps = 1e-4);

}  // namespace hrne
