#pragma once

#include <map>
#include <string>
#include <vector>

#include "tryon/core/autograd.hpp"

namespace tryon::core {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
    bool decoupled_weight_decay = false;  // true -> AdamW
};

// Adam / AdamW over a fixed parameter list. Moment buffers serialize through
// snapshot()/restore() so resumed runs continue bit-for-bit.
class Adam {
public:
    Adam(std::vector<Var> params, AdamConfig cfg);

    void set_lr(double lr) { cfg_.lr = lr; }
    double lr() const { return cfg_.lr; }
    long step_count() const { return step_; }

    void zero_grad();
    void step();
    // Global gradient-norm clipping; no-op when max_norm <= 0.
    void clip_grad_norm(double max_norm);

    std::map<std::string, Tensor> snapshot(const std::vector<std::string>& names) const;
    void restore(const std::vector<std::string>& names,
                 const std::map<std::string, Tensor>& state);

private:
    AdamConfig cfg_;
    std::vector<Var> params_;
    std::vector<Tensor> m_, v_;
    long step_ = 0;
};

}  // namespace tryon::core
