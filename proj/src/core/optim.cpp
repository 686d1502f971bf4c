#include "tryon/core/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace tryon::core {

Adam::Adam(std::vector<Var> params, AdamConfig cfg) : cfg_(cfg), params_(std::move(params)) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const auto& p : params_) {
        m_.push_back(Tensor::zeros(p.value().shape()));
        v_.push_back(Tensor::zeros(p.value().shape()));
    }
}

void Adam::zero_grad() {
    for (auto& p : params_) p.zero_grad();
}

void Adam::clip_grad_norm(double max_norm) {
    if (max_norm <= 0) return;
    double sq = 0.0;
    for (auto& p : params_) {
        if (!p.has_grad()) continue;
        const Tensor& g = p.grad();
        for (int i = 0; i < g.numel(); ++i) sq += g[i] * g[i];
    }
    double norm = std::sqrt(sq);
    if (norm <= max_norm || norm == 0.0) return;
    double scale = max_norm / norm;
    for (auto& p : params_) {
        if (!p.has_grad()) continue;
        Tensor& g = p.grad();
        for (int i = 0; i < g.numel(); ++i) g[i] *= scale;
    }
}

void Adam::step() {
    ++step_;
    double bc1 = 1.0 - std::pow(cfg_.beta1, step_);
    double bc2 = 1.0 - std::pow(cfg_.beta2, step_);
    for (size_t pi = 0; pi < params_.size(); ++pi) {
        Var& p = params_[pi];
        Tensor& val = p.value();
        Tensor& g = p.grad();
        Tensor& m = m_[pi];
        Tensor& v = v_[pi];
        for (int i = 0; i < val.numel(); ++i) {
            double grad = g[i];
            if (cfg_.weight_decay != 0.0 && !cfg_.decoupled_weight_decay)
                grad += cfg_.weight_decay * val[i];
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * grad;
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * grad * grad;
            double mhat = m[i] / bc1;
            double vhat = v[i] / bc2;
            if (cfg_.weight_decay != 0.0 && cfg_.decoupled_weight_decay)
                val[i] -= cfg_.lr * cfg_.weight_decay * val[i];
            val[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

std::map<std::string, Tensor> Adam::snapshot(const std::vector<std::string>& names) const {
    if (names.size() != params_.size())
        throw std::invalid_argument("Adam::snapshot: name count mismatch");
    std::map<std::string, Tensor> out;
    for (size_t i = 0; i < names.size(); ++i) {
        out.emplace("opt.m." + names[i], m_[i]);
        out.emplace("opt.v." + names[i], v_[i]);
    }
    out.emplace("opt.step", Tensor::scalar(static_cast<double>(step_)));
    return out;
}

void Adam::restore(const std::vector<std::string>& names,
                   const std::map<std::string, Tensor>& state) {
    if (names.size() != params_.size())
        throw std::invalid_argument("Adam::restore: name count mismatch");
    for (size_t i = 0; i < names.size(); ++i) {
        m_[i] = state.at("opt.m." + names[i]);
        v_[i] = state.at("opt.v." + names[i]);
    }
    step_ = static_cast<long>(state.at("opt.step")[0]);
}

}  // namespace tryon::core
