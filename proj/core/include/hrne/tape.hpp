#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hrne/tensor.hpp"

namespace hrne {

// Recorded computation sequence over real vectors.
//
// Every builder evaluates its result immediately and appends one record;
// backward() walks the records in reverse, applying the hand-written
// adjoint of each operation. Node values and gradients live in flat
// arenas so a tape can be reset and reused without reallocation.
//
// Parameter gradients accumulate either directly into ParamTensor::grad
// or, when a sink is supplied, into sink[param->index] - which lets
// several tapes run concurrently against shared read-only parameters.
class Tape {
public:
    using NodeId = int;

    // ---- leaves ----
    NodeId input(std::span<const double> v);
    NodeId zeros(std::size_t len);

    // ---- parameterized ops ----
    NodeId affine(ParamTensor& W, NodeId x, ParamTensor* b);              // W x (+ b)
    NodeId affine_sum(ParamTensor& Wa, NodeId a, ParamTensor& Wb, NodeId b,
                      ParamTensor* bias);                                 // Wa a + Wb b (+ bias)
    NodeId embed_row(ParamTensor& E, std::size_t row);                    // E[row, :]
    NodeId dot_param(ParamTensor& w, NodeId x);                           // [w . x]

    // ---- elementwise / structural ops ----
    NodeId add(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    NodeId mul_mask(NodeId a, std::span<const double> mask);
    NodeId scale(NodeId a, double c);
    NodeId sigmoid(NodeId a);
    NodeId tanh(NodeId a);
    NodeId max2(NodeId a, NodeId b);                                      // ties go to a
    NodeId average(std::span<const NodeId> xs);
    NodeId weighted_sum(NodeId weights, std::span<const NodeId> items);
    NodeId softmax(NodeId a);
    NodeId gather_scalars(std::span<const NodeId> xs);                    // y[i] = xs[i][0]
    NodeId add_scalars(std::span<const NodeId> xs);                       // [sum xs[i][0]]
    NodeId pick(NodeId a, std::size_t idx);                               // [a[idx]]
    NodeId neg_log_clamped(NodeId a);                                     // [-log(max(a[0], 1e-12))]

    // ---- access ----
    std::span<const double> value(NodeId n) const;
    std::span<const double> grad(NodeId n) const;
    double scalar(NodeId n) const { return value(n)[0]; }
    std::size_t len(NodeId n) const;

    // Reverse sweep from a scalar node. Accumulates parameter gradients
    // into ParamTensor::grad, or into sink[p.index] when given.
    void backward(NodeId loss);
    void backward(NodeId loss, std::span<Tensor> sink);

    void reset();  // drop all nodes, keep capacity

    bool clamp_hit() const { return clamp_hit_; }
    std::size_t node_count() const { return nodes_.size(); }

    // incremented by lstm_step; encoder instrumentation reads it
    std::size_t cell_evals = 0;

    static constexpr double kLogClamp = 1e-12;

private:
    enum class Op : std::uint8_t {
        Input, Affine, AffineSum, EmbedRow, DotParam,
        Add, Mul, MulMask, Scale, Sigmoid, Tanh, Max2,
        Average, WeightedSum, Softmax, Gather, AddScalars,
        Pick, NegLogClamped,
    };

    struct Node {
        Op op;
        int off;   // offset into value/grad arena
        int len;
        NodeId a = -1;
        NodeId b = -1;
        ParamTensor* p = nullptr;
        ParamTensor* p2 = nullptr;
        ParamTensor* p3 = nullptr;
        int args_off = 0;  // extra node ids in args_
        int args_cnt = 0;
        int aux = 0;       // row / pick index, or offset into aux_ for masks
        double c = 0.0;
    };

    NodeId push(Op op, std::size_t len);
    double* val(const Node& n) { return arena_.data() + n.off; }
    const double* val(const Node& n) const { return arena_.data() + n.off; }
    double* gval(const Node& n) { return grads_.data() + n.off; }

    void run_backward(NodeId loss, std::span<Tensor>* sink);
    double* param_grad(ParamTensor* p, std::span<Tensor>* sink);

    std::vector<Node> nodes_;
    std::vector<double> arena_;
    std::vector<double> grads_;
    std::vector<double> aux_;
    std::vector<NodeId> args_;
    bool clamp_hit_ = false;
};

}  // namespace hrne
