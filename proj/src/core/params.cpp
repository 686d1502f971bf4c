#include "tryon/core/params.hpp"

#include <cmath>
#include <stdexcept>

namespace tryon::core {

Var ParamStore::create(const std::string& name, Tensor init) {
    if (map_.count(name)) throw std::invalid_argument("ParamStore: duplicate name " + name);
    Var v = Var::leaf(std::move(init), true);
    names_.push_back(name);
    map_.emplace(name, v);
    return v;
}

Var ParamStore::get(const std::string& name) const {
    auto it = map_.find(name);
    if (it == map_.end()) throw std::invalid_argument("ParamStore: unknown name " + name);
    return it->second;
}

std::vector<Var> ParamStore::all() const {
    std::vector<Var> out;
    out.reserve(names_.size());
    for (const auto& n : names_) out.push_back(map_.at(n));
    return out;
}

void ParamStore::zero_grad() {
    for (auto& [name, v] : map_) {
        (void)name;
        const_cast<Var&>(v).zero_grad();
    }
}

std::map<std::string, Tensor> ParamStore::snapshot() const {
    std::map<std::string, Tensor> out;
    for (const auto& [name, v] : map_) out.emplace(name, v.value());
    return out;
}

void ParamStore::restore(const std::map<std::string, Tensor>& values) {
    for (const auto& n : names_) {
        auto it = values.find(n);
        if (it == values.end()) throw std::invalid_argument("ParamStore: missing tensor " + n);
        Var v = map_.at(n);
        if (!v.value().same_shape(it->second))
            throw std::invalid_argument("ParamStore: shape mismatch for " + n);
        v.value() = it->second;
    }
}

Tensor kaiming_conv_init(Rng& rng, int c_out, int c_in, int k, double gain) {
    double std = gain * std::sqrt(2.0 / (c_in * k * k));
    Tensor t = rng.normal_tensor({c_out, c_in, k, k});
    for (int i = 0; i < t.numel(); ++i) t[i] *= std;
    return t;
}

Tensor kaiming_linear_init(Rng& rng, int d_in, int d_out, double gain) {
    double std = gain * std::sqrt(2.0 / d_in);
    Tensor t = rng.normal_tensor({d_in, d_out});
    for (int i = 0; i < t.numel(); ++i) t[i] *= std;
    return t;
}

}  // namespace tryon::core
