#include "hrne/tape.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "hrne/error.hpp"
#include "hrne/ops.hpp"

namespace hrne {

Tape::NodeId Tape::push(Op op, std::size_t len) {
    Node n;
    n.op = op;
    n.off = static_cast<int>(arena_.size());
    n.len = static_cast<int>(len);
    arena_.resize(arena_.size() + len, 0.0);
    nodes_.push_back(n);
    return static_cast<NodeId>(nodes_.size() - 1);
}

Tape::NodeId Tape::input(std::span<const double> v) {
    const NodeId id = push(Op::Input, v.size());
    std::copy(v.begin(), v.end(), val(nodes_[id]));
    return id;
}

Tape::NodeId Tape::zeros(std::size_t len) { return push(Op::Input, len); }

Tape::NodeId Tape::affine(ParamTensor& W, NodeId x, ParamTensor* b) {
    const Node& xn = nodes_[x];
    if (W.value.cols() != static_cast<std::size_t>(xn.len)) {
        throw ShapeError("affine: " + W.name + " is " + W.value.shape_str() +
                         " but input has length " + std::to_string(xn.len));
    }
    const NodeId id = push(Op::Affine, W.value.rows());
    Node& n = nodes_[id];
    n.a = x;
    n.p = &W;
    n.p2 = b;
    affine_into(W.value, {val(nodes_[x]), static_cast<std::size_t>(nodes_[x].len)},
                b ? b->value.data() : nullptr, val(n));
    return id;
}

Tape::NodeId Tape::affine_sum(ParamTensor& Wa, NodeId a, ParamTensor& Wb, NodeId b,
                              ParamTensor* bias) {
    if (Wa.value.rows() != Wb.value.rows()) {
        throw ShapeError("affine_sum: " + Wa.name + " and " + Wb.name + " disagree on rows");
    }
    const NodeId id = push(Op::AffineSum, Wa.value.rows());
    Node& n = nodes_[id];
    n.a = a;
    n.b = b;
    n.p = &Wa;
    n.p2 = &Wb;
    n.p3 = bias;
    const std::size_t m = Wa.value.rows();
    std::vector<double> tmp(m);
    affine_into(Wa.value, {val(nodes_[a]), static_cast<std::size_t>(nodes_[a].len)},
                bias ? bias->value.data() : nullptr, val(n));
    affine_into(Wb.value, {val(nodes_[b]), static_cast<std::size_t>(nodes_[b].len)}, nullptr,
                tmp.data());
    double* y = val(n);
    for (std::size_t i = 0; i < m; ++i) y[i] += tmp[i];
    return id;
}

Tape::NodeId Tape::embed_row(ParamTensor& E, std::size_t row) {
    if (row >= E.value.rows()) {
        throw ShapeError("embed_row: row " + std::to_string(row) + " out of range for " + E.name +
                         " (" + E.value.shape_str() + ")");
    }
    const NodeId id = push(Op::EmbedRow, E.value.cols());
    Node& n = nodes_[id];
    n.p = &E;
    n.aux = static_cast<int>(row);
    auto r = E.value.row(row);
    std::copy(r.begin(), r.end(), val(n));
    return id;
}

Tape::NodeId Tape::dot_param(ParamTensor& w, NodeId x) {
    if (w.value.size() != static_cast<std::size_t>(nodes_[x].len)) {
        throw ShapeError("dot_param: " + w.name + " length " + std::to_string(w.value.size()) +
                         " vs input length " + std::to_string(nodes_[x].len));
    }
    const NodeId id = push(Op::DotParam, 1);
    Node& n = nodes_[id];
    n.a = x;
    n.p = &w;
    double s = 0.0;
    const double* xi = val(nodes_[x]);
    const double* wv = w.value.data();
    for (std::size_t i = 0; i < w.value.size(); ++i) s += wv[i] * xi[i];
    val(n)[0] = s;
    return id;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    require_shape(nodes_[a].len == nodes_[b].len, "add: length mismatch");
    const NodeId id = push(Op::Add, nodes_[a].len);
    Node& n = nodes_[id];
    n.a = a;
    n.b = b;
    const double* av = val(nodes_[a]);
    const double* bv = val(nodes_[b]);
    double* y = val(n);
    for (int i = 0; i < n.len; ++i) y[i] = av[i] + bv[i];
    return id;
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
    require_shape(nodes_[a].len == nodes_[b].len, "mul: length mismatch");
    const NodeId id = push(Op::Mul, nodes_[a].len);
    Node& n = nodes_[id];
    n.a = a;
    n.b = b;
    const double* av = val(nodes_[a]);
    const double* bv = val(nodes_[b]);
    double* y = val(n);
    for (int i = 0; i < n.len; ++i) y[i] = av[i] * bv[i];
    return id;
}

Tape::NodeId Tape::mul_mask(NodeId a, std::span<const double> mask) {
    require_shape(nodes_[a].len == static_cast<int>(mask.size()), "mul_mask: length mismatch");
    const NodeId id = push(Op::MulMask, nodes_[a].len);
    Node& n = nodes_[id];
    n.a = a;
    n.aux = static_cast<int>(aux_.size());
    aux_.insert(aux_.end(), mask.begin(), mask.end());
    const double* av = val(nodes_[a]);
    const double* m = aux_.data() + n.aux;
    double* y = val(n);
    for (int i = 0; i < n.len; ++i) y[i] = av[i] * m[i];
    return id;
}

Tape::NodeId Tape::scale(NodeId a, double c) {
    const NodeId id = push(Op::Scale, nodes_[a].len);
    Node& n = nodes_[id];
    n.a = a;
    n.c = c;
    const double* av = val(nodes_[a]);
    double* y = val(n);
    for (int i = 0; i < n.len; ++i) y[i] = av[i] * c;
    return id;
}

Tape::NodeId Tape::sigmoid(NodeId a) {
    const NodeId id = push(Op::Sigmoid, nodes_[a].len);
    Node& n = nodes_[id];
    n.a = a;
    const double* av = val(nodes_[a]);
    double* y = val(n);
    for (int i = 0; i < n.len; ++i) y[i] = sigmoid_scalar(av[i]);
    return id;
}

Tape::NodeId Tape::tanh(NodeId a) {
    const NodeId id = push(Op::Tanh, nodes_[a].len);
    Node& n = nodes_[id];
    n.a = a;
    const double* av = val(nodes_[a]);
    double* y = val(n);
    for (int i = 0; i < n.len; ++i) y[i] = std::tanh(av[i]);
    return id;
}

Tape::NodeId Tape::max2(NodeId a, NodeId b) {
    require_shape(nodes_[a].len == nodes_[b].len, "max2: piece length mismatch");
    const NodeId id = push(Op::Max2, nodes_[a].len);
    Node& n = nodes_[id];
    n.a = a;
    n.b = b;
    const double* av = val(nodes_[a]);
    const double* bv = val(nodes_[b]);
    double* y = val(n);
    for (int i = 0; i < n.len; ++i) y[i] = av[i] >= bv[i] ? av[i] : bv[i];
    return id;
}

Tape::NodeId Tape::average(std::span<const NodeId> xs) {
    require_shape(!xs.empty(), "average: empty node list");
    const int len = nodes_[xs[0]].len;
    const NodeId id = push(Op::Average, len);
    Node& n = nodes_[id];
    n.args_off = static_cast<int>(args_.size());
    n.args_cnt = static_cast<int>(xs.size());
    args_.insert(args_.end(), xs.begin(), xs.end());
    double* y = val(n);
    for (NodeId x : xs) {
        require_shape(nodes_[x].len == len, "average: length mismatch");
        const double* xv = val(nodes_[x]);
        for (int i = 0; i < len; ++i) y[i] += xv[i];
    }
    const double inv = 1.0 / static_cast<double>(xs.size());
    for (int i = 0; i < len; ++i) y[i] *= inv;
    return id;
}

Tape::NodeId Tape::weighted_sum(NodeId weights, std::span<const NodeId> items) {
    require_shape(nodes_[weights].len == static_cast<int>(items.size()),
                  "weighted_sum: weight count " + std::to_string(nodes_[weights].len) +
                      " vs item count " + std::to_string(items.size()));
    const int len = nodes_[items[0]].len;
    const NodeId id = push(Op::WeightedSum, len);
    Node& n = nodes_[id];
    n.a = weights;
    n.args_off = static_cast<int>(args_.size());
    n.args_cnt = static_cast<int>(items.size());
    args_.insert(args_.end(), items.begin(), items.end());
    const double* w = val(nodes_[weights]);
    double* y = val(n);
    for (std::size_t k = 0; k < items.size(); ++k) {
        require_shape(nodes_[items[k]].len == len, "weighted_sum: item length mismatch");
        const double* xv = val(nodes_[items[k]]);
        for (int i = 0; i < len; ++i) y[i] += w[k] * xv[i];
    }
    return id;
}

Tape::NodeId Tape::softmax(NodeId a) {
    require_shape(nodes_[a].len > 0, "softmax: empty input");
    const NodeId id = push(Op::Softmax, nodes_[a].len);
    Node& n = nodes_[id];
    n.a = a;
    softmax_into({val(nodes_[a]), static_cast<std::size_t>(nodes_[a].len)}, val(n));
    return id;
}

Tape::NodeId Tape::gather_scalars(std::span<const NodeId> xs) {
    const NodeId id = push(Op::Gather, xs.size());
    Node& n = nodes_[id];
    n.args_off = static_cast<int>(args_.size());
    n.args_cnt = static_cast<int>(xs.size());
    args_.insert(args_.end(), xs.begin(), xs.end());
    double* y = val(n);
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = val(nodes_[xs[i]])[0];
    return id;
}

Tape::NodeId Tape::add_scalars(std::span<const NodeId> xs) {
    const NodeId id = push(Op::AddScalars, 1);
    Node& n = nodes_[id];
    n.args_off = static_cast<int>(args_.size());
    n.args_cnt = static_cast<int>(xs.size());
    args_.insert(args_.end(), xs.begin(), xs.end());
    double s = 0.0;
    for (NodeId x : xs) s += val(nodes_[x])[0];
    val(n)[0] = s;
    return id;
}

Tape::NodeId Tape::pick(NodeId a, std::size_t idx) {
    require_shape(idx < static_cast<std::size_t>(nodes_[a].len), "pick: index out of range");
    const NodeId id = push(Op::Pick, 1);
    Node& n = nodes_[id];
    n.a = a;
    n.aux = static_cast<int>(idx);
    val(n)[0] = val(nodes_[a])[idx];
    return id;
}

Tape::NodeId Tape::neg_log_clamped(NodeId a) {
    const NodeId id = push(Op::NegLogClamped, 1);
    Node& n = nodes_[id];
    n.a = a;
    const double p = val(nodes_[a])[0];
    if (p < kLogClamp) clamp_hit_ = true;
    val(n)[0] = -std::log(std::max(p, kLogClamp));
    return id;
}

std::span<const double> Tape::value(NodeId n) const {
    const Node& node = nodes_[n];
    return {arena_.data() + node.off, static_cast<std::size_t>(node.len)};
}

std::span<const double> Tape::grad(NodeId n) const {
    const Node& node = nodes_[n];
    return {grads_.data() + node.off, static_cast<std::size_t>(node.len)};
}

std::size_t Tape::len(NodeId n) const { return static_cast<std::size_t>(nodes_[n].len); }

void Tape::backward(NodeId loss) { run_backward(loss, nullptr); }

void Tape::backward(NodeId loss, std::span<Tensor> sink) { run_backward(loss, &sink); }

double* Tape::param_grad(ParamTensor* p, std::span<Tensor>* sink) {
    if (!sink) return p->grad.data();
    assert(p->index >= 0 && static_cast<std::size_t>(p->index) < sink->size());
    return (*sink)[p->index].data();
}

void Tape::run_backward(NodeId loss, std::span<Tensor>* sink) {
    require_shape(nodes_[loss].len == 1, "backward: loss must be scalar");
    grads_.assign(arena_.size(), 0.0);
    grads_[nodes_[loss].off] = 1.0;

    for (int idx = loss; idx >= 0; --idx) {
        Node& n = nodes_[idx];
        const double* gy = grads_.data() + n.off;
        bool live = false;
        for (int i = 0; i < n.len && !live; ++i) live = gy[i] != 0.0;
        if (!live) continue;

        switch (n.op) {
            case Op::Input:
                break;
            case Op::Affine: {
                const Node& xn = nodes_[n.a];
                affine_backward(n.p->value, {val(xn), static_cast<std::size_t>(xn.len)}, gy,
                                gval(const_cast<Node&>(xn)), param_grad(n.p, sink),
                                n.p2 ? param_grad(n.p2, sink) : nullptr);
                break;
            }
            case Op::AffineSum: {
                const Node& an = nodes_[n.a];
                const Node& bn = nodes_[n.b];
                affine_backward(n.p->value, {val(an), static_cast<std::size_t>(an.len)}, gy,
                                gval(const_cast<Node&>(an)), param_grad(n.p, sink),
                                n.p3 ? param_grad(n.p3, sink) : nullptr);
                affine_backward(n.p2->value, {val(bn), static_cast<std::size_t>(bn.len)}, gy,
                                gval(const_cast<Node&>(bn)), param_grad(n.p2, sink), nullptr);
                break;
            }
            case Op::EmbedRow: {
                double* ge = param_grad(n.p, sink) + n.aux * n.p->value.cols();
                for (int i = 0; i < n.len; ++i) ge[i] += gy[i];
                break;
            }
            case Op::DotParam: {
                const Node& xn = nodes_[n.a];
                const double g = gy[0];
                double* gx = gval(const_cast<Node&>(xn));
                double* gw = param_grad(n.p, sink);
                const double* xv = val(xn);
                const double* wv = n.p->value.data();
                for (int i = 0; i < xn.len; ++i) {
                    gx[i] += g * wv[i];
                    gw[i] += g * xv[i];
                }
                break;
            }
            case Op::Add: {
                double* ga = gval(nodes_[n.a]);
                double* gb = gval(nodes_[n.b]);
                for (int i = 0; i < n.len; ++i) {
                    ga[i] += gy[i];
                    gb[i] += gy[i];
                }
                break;
            }
            case Op::Mul: {
                double* ga = gval(nodes_[n.a]);
                double* gb = gval(nodes_[n.b]);
                const double* av = val(nodes_[n.a]);
                const double* bv = val(nodes_[n.b]);
                for (int i = 0; i < n.len; ++i) {
                    ga[i] += gy[i] * bv[i];
                    gb[i] += gy[i] * av[i];
                }
                break;
            }
            case Op::MulMask: {
                double* ga = gval(nodes_[n.a]);
                const double* m = aux_.data() + n.aux;
                for (int i = 0; i < n.len; ++i) ga[i] += gy[i] * m[i];
                break;
            }
            case Op::Scale: {
                double* ga = gval(nodes_[n.a]);
                for (int i = 0; i < n.len; ++i) ga[i] += gy[i] * n.c;
                break;
            }
            case Op::Sigmoid: {
                double* ga = gval(nodes_[n.a]);
                const double* y = val(n);
                for (int i = 0; i < n.len; ++i) ga[i] += gy[i] * y[i] * (1.0 - y[i]);
                break;
            }
            case Op::Tanh: {
                double* ga = gval(nodes_[n.a]);
                const double* y = val(n);
                for (int i = 0; i < n.len; ++i) ga[i] += gy[i] * (1.0 - y[i] * y[i]);
                break;
            }
            case Op::Max2: {
                double* ga = gval(nodes_[n.a]);
                double* gb = gval(nodes_[n.b]);
                const double* av = val(nodes_[n.a]);
                const double* bv = val(nodes_[n.b]);
                for (int i = 0; i < n.len; ++i) {
                    if (av[i] >= bv[i]) {
                        ga[i] += gy[i];
                    } else {
                        gb[i] += gy[i];
                    }
                }
                break;
            }
            case Op::Average: {
                const double inv = 1.0 / static_cast<double>(n.args_cnt);
                for (int k = 0; k < n.args_cnt; ++k) {
                    double* gx = gval(nodes_[args_[n.args_off + k]]);
                    for (int i = 0; i < n.len; ++i) gx[i] += gy[i] * inv;
                }
                break;
            }
            case Op::WeightedSum: {
                const double* w = val(nodes_[n.a]);
                double* gw = gval(nodes_[n.a]);
                for (int k = 0; k < n.args_cnt; ++k) {
                    const Node& item = nodes_[args_[n.args_off + k]];
                    double* gx = gval(const_cast<Node&>(item));
                    const double* xv = val(item);
                    double dot = 0.0;
                    for (int i = 0; i < n.len; ++i) {
                        gx[i] += gy[i] * w[k];
                        dot += gy[i] * xv[i];
                    }
                    gw[k] += dot;
                }
                break;
            }
            case Op::Softmax: {
                // dx = y .* (gy - (y . gy))
                double* ga = gval(nodes_[n.a]);
                const double* y = val(n);
                double dot = 0.0;
                for (int i = 0; i < n.len; ++i) dot += y[i] * gy[i];
                for (int i = 0; i < n.len; ++i) ga[i] += y[i] * (gy[i] - dot);
                break;
            }
            case Op::Gather: {
                for (int k = 0; k < n.args_cnt; ++k) {
                    gval(nodes_[args_[n.args_off + k]])[0] += gy[k];
                }
                break;
            }
            case Op::AddScalars: {
                for (int k = 0; k < n.args_cnt; ++k) {
                    gval(nodes_[args_[n.args_off + k]])[0] += gy[0];
                }
                break;
            }
            case Op::Pick: {
                gval(nodes_[n.a])[n.aux] += gy[0];
                break;
            }
            case Op::NegLogClamped: {
                const double p = val(nodes_[n.a])[0];
                if (p >= kLogClamp) {
                    gval(nodes_[n.a])[0] += -gy[0] / p;
                }
                break;
            }
        }
    }
}

void Tape::reset() {
    nodes_.clear();
    arena_.clear();
    grads_.clear();
    aux_.clear();
    args_.clear();
    clamp_hit_ = false;
    cell_evals = 0;
}

}  // namespace hrne
