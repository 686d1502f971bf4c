#pragma once

#include "tryon/warp/types.hpp"

namespace tryon::warp {

// fused = alpha * f_low + beta * f_high_projected; shapes must already match.
core::Var fuse_features(const core::Var& f_low, const core::Var& f_high_projected, double alpha,
                        double beta);

CorrelationVolume local_correlation(const core::Var& feat_a, const core::Var& feat_b, int radius);

core::Var deformable_conv(const core::Var& input, const DeformableKernel& kernel,
                          const core::Var& offsets);

// Displacement-field composition: out(x) = r(x) + sample(prev, x + r(x)).
// Reduces to addition for constant fields and to either argument when the
// other is zero.
AppearanceFlow compose_flow(const AppearanceFlow& prev, const AppearanceFlow& residual);

// Bilinear spatial upsample with displacement magnitudes scaled by the factor.
AppearanceFlow upsample_flow(const AppearanceFlow& flow, int factor);
// Cascade glue: resize to an explicit target, scaling each displacement
// channel by its axis ratio.
AppearanceFlow upsample_flow_to(const AppearanceFlow& flow, int out_h, int out_w);

enum class WarpMode { bilinear, nearest };

// out(x) = sample(image, x + flow(x)); zero-filled outside bounds.
ImageTensor warp_image(const ImageTensor& image, const AppearanceFlow& flow,
                       WarpMode mode = WarpMode::bilinear);
// Differentiable path used inside training graphs.
core::Var warp_image_var(const core::Var& image, const AppearanceFlow& flow);

}  // namespace tryon::warp
