#pragma once

#include "tryon/core/extractor.hpp"
#include "tryon/warp/types.hpp"

namespace tryon::warp {

struct WarpLossTerms {
    core::Var total;
    double l1 = 0.0;
    double perceptual = 0.0;
    double smooth_first = 0.0;
    double smooth_second = 0.0;
};

// L = L1(warped, target) + lambda1 * perceptual + lambda2 * first-order flow
// smoothness + lambda3 * second-order flow smoothness. The perceptual term is
// skipped when no extractor is given (or lambda1 == 0).
WarpLossTerms warp_training_loss(const core::Var& warped, const core::Var& target_region,
                                 const std::vector<AppearanceFlow>& flows, double lambda1,
                                 double lambda2, double lambda3,
                                 const core::FeatureExtractor* perceptual = nullptr);

}  // namespace tryon::warp
