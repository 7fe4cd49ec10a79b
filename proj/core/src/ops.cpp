#include "hrne/ops.hpp"

#include <algorithm>
#include <cmath>

#include "hrne/error.hpp"

namespace hrne {

void affine_into(const Tensor& W, std::span<const double> x, const double* b, double* y) {
    const std::size_t m = W.rows();
    const std::size_t k = W.cols();
    const double* w = W.data();
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = w + i * k;
        double s = b ? b[i] : 0.0;
        for (std::size_t j = 0; j < k; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

void affine_backward(const Tensor& W, std::span<const double> x, const double* dy,
                     double* dx, double* dW, double* db) {
    const std::size_t m = W.rows();
    const std::size_t k = W.cols();
    const double* w = W.data();
    for (std::size_t i = 0; i < m; ++i) {
        const double g = dy[i];
        if (g == 0.0) continue;
        const double* row = w + i * k;
        if (dx) {
            for (std::size_t j = 0; j < k; ++j) dx[j] += row[j] * g;
        }
        if (dW) {
            double* drow = dW + i * k;
            for (std::size_t j = 0; j < k; ++j) drow[j] += g * x[j];
        }
        if (db) db[i] += g;
    }
}

Tensor affine(const Tensor& W, const Tensor& x, const Tensor& b) {
    require_shape(W.rank() == 2, "affine: W must be a matrix, got shape " + W.shape_str());
    if (W.cols() != x.size()) {
        throw ShapeError("affine: W is " + W.shape_str() + " but x has length " +
                         std::to_string(x.size()));
    }
    if (W.rows() != b.size()) {
        throw ShapeError("affine: W is " + W.shape_str() + " but b has length " +
                         std::to_string(b.size()));
    }
    Tensor y = Tensor::vector(W.rows());
    affine_into(W, x.span(), b.data(), y.data());
    check_finite(y.span(), "affine");
    return y;
}

void softmax_into(std::span<const double> v, double* out) {
    double mx = v[0];
    for (double e : v) mx = std::max(mx, e);
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - mx);
        total += out[i];
    }
    const double inv = 1.0 / total;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] *= inv;
}

Tensor softmax(const Tensor& v) {
    if (v.size() == 0) throw ShapeError("softmax: empty input");
    check_finite(v.span(), "softmax input");
    Tensor y = Tensor::vector(v.size());
    softmax_into(v.span(), y.data());
    return y;
}

double sigmoid_scalar(double x) {
    // split on sign so exp never overflows
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void activation_into(Activation kind, std::span<const double> v, double* out) {
    if (kind == Activation::sigmoid) {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = sigmoid_scalar(v[i]);
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    }
}

Tensor activation(Activation kind, const Tensor& v) {
    check_finite(v.span(), "activation input");
    Tensor y = Tensor::vector(v.size());
    activation_into(kind, v.span(), y.data());
    return y;
}

namespace {

double float_representable_uniform(Rng& rng, double scale) {
    const double u = rng.uniform(-scale, scale);
    double v = static_cast<double>(static_cast<float>(u));
    // rounding to float may step just past the bound; pull back inside
    if (v > scale) v = static_cast<double>(std::nextafter(static_cast<float>(v), 0.0f));
    if (v < -scale) v = static_cast<double>(std::nextafter(static_cast<float>(v), 0.0f));
    return v;
}

}  // namespace

Tensor param_init(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
    if (scale <= 0.0) throw ConfigError("param_init: scale must be positive");
    Tensor t = Tensor::matrix(rows, cols);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = float_representable_uniform(rng, scale);
    return t;
}

Tensor param_init(Rng& rng, std::size_t len, double scale) {
    if (scale <= 0.0) throw ConfigError("param_init: scale must be positive");
    Tensor t = Tensor::vector(len);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = float_representable_uniform(rng, scale);
    return t;
}

void check_finite(std::span<const double> v, const char* what) {
    for (double e : v) {
        if (!std::isfinite(e)) {
            throw NumericError(std::string(what) + ": non-finite value");
        }
    }
}

}  // namespace hrne
