#pragma once

#include <memory>
#include <vector>

#include "tryon/core/autograd.hpp"
#include "tryon/core/rng.hpp"

namespace tryon::core {

// Pluggable image feature extractor. Stands in for pretrained perceptual /
// inception backbones, which are out of scope for this artifact.
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    // Feature maps per layer, coarsest last. Input (c,H,W).
    virtual std::vector<Tensor> features(const Tensor& image) const = 0;
    // Autograd path (gradients flow to the input; extractor weights are fixed).
    virtual std::vector<Var> features_var(const Var& image) const = 0;
    // Single vector per image for distribution metrics (mean-pooled last map).
    Tensor descriptor(const Tensor& image) const;
    virtual int descriptor_dim() const = 0;
    virtual uint64_t seed() const = 0;
};

// Fixed-seed 3-layer conv network, stride 2 per layer, leaky ReLU.
class RandomConvExtractor : public FeatureExtractor {
public:
    RandomConvExtractor(uint64_t seed, int in_channels, std::vector<int> widths = {8, 16, 16},
                        int kernel = 3);
    std::vector<Tensor> features(const Tensor& image) const override;
    std::vector<Var> features_var(const Var& image) const override;
    int descriptor_dim() const override { return widths_.back(); }
    uint64_t seed() const override { return seed_; }

private:
    uint64_t seed_;
    int in_channels_;
    std::vector<int> widths_;
    std::vector<Tensor> weights_;
    std::vector<Tensor> biases_;
};

}  // namespace tryon::core
