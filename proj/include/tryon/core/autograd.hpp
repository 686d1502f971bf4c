#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "tryon/core/tensor.hpp"

namespace tryon::core {

// Reverse-mode autograd over Tensor. A Var wraps a graph node; ops build the
// graph eagerly and backward() walks it in reverse topological order.
// Everything runs in double so finite-difference checks are done in float64.

struct Node {
    Tensor value;
    Tensor grad;  // allocated lazily by accum_grad
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backward;

    Tensor& ensure_grad() {
        if (!grad.defined() || !grad.same_shape(value)) grad = Tensor::zeros(value.shape());
        return grad;
    }
};

class Var {
public:
    Var() = default;
    explicit Var(std::shared_ptr<Node> n) : n_(std::move(n)) {}

    static Var leaf(Tensor value, bool requires_grad);
    static Var constant(Tensor value) { return leaf(std::move(value), false); }

    bool defined() const { return n_ != nullptr; }
    const Tensor& value() const { return n_->value; }
    Tensor& value() { return n_->value; }
    Tensor& grad() { return n_->ensure_grad(); }
    bool has_grad() const { return n_->grad.defined(); }
    bool requires_grad() const { return n_ && n_->requires_grad; }
    void zero_grad() { if (n_ && n_->grad.defined()) n_->grad.fill(0.0); }
    std::shared_ptr<Node> node() const { return n_; }

private:
    std::shared_ptr<Node> n_;
};

// Backpropagate from a scalar (numel==1) root.
void backward(const Var& root);

// ---- elementwise ----
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var add_scalar(const Var& a, double s);
Var mul_scalar(const Var& a, double s);
// Broadcast a {1}-shaped Var against a tensor Var.
Var mul_scalar_var(const Var& s, const Var& x);

Var relu(const Var& a);
Var leaky_relu(const Var& a, double slope = 0.1);
Var silu(const Var& a);
Var gelu(const Var& a);
Var tanh_op(const Var& a);

// ---- reductions / losses ----
Var sum(const Var& a);
Var mean(const Var& a);
Var mse_loss(const Var& a, const Var& b);
Var l1_loss(const Var& a, const Var& b);

// ---- linear algebra on 2-D (rows, cols) ----
Var matmul(const Var& a, const Var& b);
Var transpose(const Var& a);
Var linear(const Var& x, const Var& w, const Var& b);  // x{n,di} w{di,do} b{do}
Var softmax_rows(const Var& x, const std::vector<char>* key_mask = nullptr);
Var layer_norm_rows(const Var& x, const Var& gamma, const Var& beta, double eps = 1e-5);
Var embedding_rows(const Var& table, const std::vector<int>& ids);
Var concat_rows(const std::vector<Var>& parts);
Var slice_rows(const Var& x, int r0, int r1);
Var add_row_broadcast(const Var& x, const Var& row);  // x{n,d} + row{1,d} or {d}

// ---- convolution and sampling on 3-D (channels, h, w) ----
Var conv2d(const Var& x, const Var& w, const Var& b, int stride = 1);
Var deform_conv2d(const Var& x, const Var& w, const Var& b, const Var& offsets);
// out(x) = bilinear_sample(img, x + flow(x)); flow channel 0 = horizontal.
Var grid_warp(const Var& img, const Var& flow);
Var upsample_bilinear(const Var& x, int out_h, int out_w);  // align_corners
Var local_correlation_op(const Var& a, const Var& b, int radius);
Var concat_channels(const std::vector<Var>& parts);
Var slice_channels(const Var& x, int c0, int c1);
Var add_channel_bias(const Var& x, const Var& bias);  // x{C,h,w} + bias{C}
Var chw_to_rows(const Var& x);                         // {C,h,w} -> {h*w, C}
Var rows_to_chw(const Var& x, int h, int w);           // {h*w, C} -> {C,h,w}
// Sum of squared forward differences of the given order (1 or 2), per channel.
Var flow_smoothness(const Var& flow, int order);

// ---- plain-tensor kernels shared with non-autograd callers ----
Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int stride);
Tensor grid_warp_nearest(const Tensor& img, const Tensor& flow);
Tensor upsample_bilinear_forward(const Tensor& x, int out_h, int out_w);
double bilinear_sample_zero(const Tensor& img, int channel, double fy, double fx);

}  // namespace tryon::core
