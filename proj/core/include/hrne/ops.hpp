#pragma once

#include <span>

#include "hrne/rng.hpp"
#include "hrne/tensor.hpp"

namespace hrne {

enum class Activation { sigmoid, tanh };

// y = W x + b. Shapes: W is m x k, x length k, b length m (b may be null).
void affine_into(const Tensor& W, std::span<const double> x, const double* b, double* y);

// Accumulating adjoints of affine_into: given dy, add W^T dy into dx,
// dy x^T into dW and dy into db.
void affine_backward(const Tensor& W, std::span<const double> x, const double* dy,
                     double* dx, double* dW, double* db);

Tensor affine(const Tensor& W, const Tensor& x, const Tensor& b);

// Max-subtracted softmax; large inputs do not overflow.
void softmax_into(std::span<const double> v, double* out);
Tensor softmax(const Tensor& v);

double sigmoid_scalar(double x);
void activation_into(Activation kind, std::span<const double> v, double* out);
Tensor activation(Activation kind, const Tensor& v);

// Entries i.i.d. uniform in [-scale, scale], deterministic in the rng state.
// Draws are rounded to 32-bit float precision so freshly initialized
// parameters survive the float32 checkpoint encoding bit-exactly.
Tensor param_init(Rng& rng, std::size_t rows, std::size_t cols, double scale);
Tensor param_init(Rng& rng, std::size_t len, double scale);

void check_finite(std::span<const double> v, const char* what);

}  // namespace hrne
