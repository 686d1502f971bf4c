#pragma once

#include <map>
#include <string>
#include <vector>

#include "tryon/core/autograd.hpp"
#include "tryon/core/rng.hpp"

namespace tryon::core {

// Named collection of trainable leaf Vars. Registration order is stable so
// optimizers and checkpoints see a deterministic parameter sequence.
class ParamStore {
public:
    Var create(const std::string& name, Tensor init);
    Var get(const std::string& name) const;
    bool has(const std::string& name) const { return map_.count(name) > 0; }
    const std::vector<std::string>& names() const { return names_; }
    std::vector<Var> all() const;
    void zero_grad();
    size_t size() const { return names_.size(); }

    // Copies values into / out of a name->tensor map (checkpoint exchange).
    std::map<std::string, Tensor> snapshot() const;
    void restore(const std::map<std::string, Tensor>& values);

private:
    std::vector<std::string> names_;
    std::map<std::string, Var> map_;
};

// Weight initializers.
Tensor kaiming_conv_init(Rng& rng, int c_out, int c_in, int k, double gain = 1.0);
Tensor kaiming_linear_init(Rng& rng, int d_in, int d_out, double gain = 1.0);

}  // namespace tryon::core
