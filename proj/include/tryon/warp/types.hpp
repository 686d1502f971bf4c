#pragma once

#include <vector>

#include "tryon/core/autograd.hpp"
#include "tryon/core/image.hpp"

namespace tryon::warp {

// Dense displacement field: channel 0 = horizontal offset in pixels,
// channel 1 = vertical. Carried as a Var so cascades stay differentiable.
struct AppearanceFlow {
    core::Var data;  // (2,h,w)

    static AppearanceFlow zeros(int h, int w);
    static AppearanceFlow from_tensor(core::Tensor t);

    int height() const { return data.value().dim(1); }
    int width() const { return data.value().dim(2); }
    void validate() const;
};

// Multi-scale feature stack; level 0 is the finest. Enforces the per-level
// ceil-halving invariant.
struct FeaturePyramid {
    std::vector<core::Var> levels;
    int low_index = 0;
    int high_index = 0;

    int depth() const { return static_cast<int>(levels.size()); }
    void validate() const;
};

// Local cost volume: (2r+1)^2 channels of normalized inner products.
struct CorrelationVolume {
    core::Var data;
    int radius = 0;
};

// Weights + sampling grid of a deformable convolution; offsets are supplied
// per call since they are predicted from the input.
struct DeformableKernel {
    core::Var weights;  // (c_out, c_in, k, k), k odd
    core::Var bias;     // (c_out)

    int kernel_size() const { return weights.value().dim(2); }
    void validate() const;
};

}  // namespace tryon::warp
