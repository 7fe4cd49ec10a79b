#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hrne/error.hpp"

namespace hrne {

// Dense rank-1 or rank-2 real tensor, row-major.
class Tensor {
public:
    Tensor() = default;

    static Tensor vector(std::size_t n) {
        Tensor t;
        t.shape_ = {n};
        t.data_.assign(n, 0.0);
        return t;
    }

    static Tensor matrix(std::size_t rows, std::size_t cols) {
        Tensor t;
        t.shape_ = {rows, cols};
        t.data_.assign(rows * cols, 0.0);
        return t;
    }

    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    const std::vector<std::size_t>& shape() const { return shape_; }

    std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
    std::size_t cols() const { return rank() == 2 ? shape_[1] : 1; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> span() { return {data_.data(), data_.size()}; }
    std::span<const double> span() const { return {data_.data(), data_.size()}; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols(), cols()}; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    std::string shape_str() const {
        if (rank() == 1) return std::to_string(rows());
        return std::to_string(rows()) + "x" + std::to_string(cols());
    }

    bool operator==(const Tensor& other) const {
        return shape_ == other.shape_ && data_ == other.data_;
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

// A named trainable tensor with its accumulated gradient.
// grad always has the same shape as value; names must be unique within a model.
struct ParamTensor {
    std::string name;
    Tensor value;
    Tensor grad;
    int index = -1;  // slot in the owning model's tensor list, -1 if unattached

    ParamTensor() = default;
    ParamTensor(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
        grad = value;
        grad.fill(0.0);
    }

    std::size_t size() const { return value.size(); }
    void zero_grad() { grad.fill(0.0); }
};

inline void require_shape(bool ok, const std::string& msg) {
    if (!ok) throw ShapeError(msg);
}

}  // namespace hrne
