#include "tryon/warp/ops.hpp"

#include <cmath>

#include "tryon/core/errors.hpp"

namespace tryon::warp {

using core::Tensor;
using core::Var;

AppearanceFlow AppearanceFlow::zeros(int h, int w) {
    return AppearanceFlow{Var::constant(Tensor::zeros({2, h, w}))};
}

AppearanceFlow AppearanceFlow::from_tensor(Tensor t) {
    AppearanceFlow f{Var::constant(std::move(t))};
    f.validate();
    return f;
}

void AppearanceFlow::validate() const {
    if (!data.defined() || data.value().ndim() != 3 || data.value().dim(0) != 2)
        throw DimensionError("AppearanceFlow: expected (2,h,w)");
    if (!data.value().all_finite()) throw ArgumentError("AppearanceFlow: non-finite values");
}

void FeaturePyramid::validate() const {
    if (levels.size() < 2) throw DimensionError("FeaturePyramid: needs at least 2 levels");
    for (size_t l = 1; l < levels.size(); ++l) {
        int ph = levels[l - 1].value().dim(1), pw = levels[l - 1].value().dim(2);
        int h = levels[l].value().dim(1), w = levels[l].value().dim(2);
        if (h != (ph + 1) / 2 || w != (pw + 1) / 2)
            throw DimensionError("FeaturePyramid: level " + std::to_string(l) +
                                 " violates the halving invariant");
    }
    if (low_index < 0 || high_index >= depth() || low_index > high_index)
        throw ArgumentError("FeaturePyramid: bad low/high indices");
}

void DeformableKernel::validate() const {
    if (weights.value().ndim() != 4) throw DimensionError("DeformableKernel: weights must be 4-D");
    int k = weights.value().dim(2);
    if (k != weights.value().dim(3) || k % 2 == 0)
        throw DimensionError("DeformableKernel: kernel must be square and odd");
    if (bias.value().numel() != weights.value().dim(0))
        throw DimensionError("DeformableKernel: bias size mismatch");
}

Var fuse_features(const Var& f_low, const Var& f_high_projected, double alpha, double beta) {
    if (!f_low.value().same_shape(f_high_projected.value()))
        throw DimensionError("fuse_features: projected high-level features must match " +
                             core::shape_str(f_low.value().shape()));
    return core::add(core::mul_scalar(f_low, alpha), core::mul_scalar(f_high_projected, beta));
}

CorrelationVolume local_correlation(const Var& feat_a, const Var& feat_b, int radius) {
    return CorrelationVolume{core::local_correlation_op(feat_a, feat_b, radius), radius};
}

Var deformable_conv(const Var& input, const DeformableKernel& kernel, const Var& offsets) {
    kernel.validate();
    return core::deform_conv2d(input, kernel.weights, kernel.bias, offsets);
}

AppearanceFlow compose_flow(const AppearanceFlow& prev, const AppearanceFlow& residual) {
    if (!prev.data.value().same_shape(residual.data.value()))
        throw DimensionError("compose_flow: flows must share spatial dims");
    Var sampled_prev = core::grid_warp(prev.data, residual.data);
    return AppearanceFlow{core::add(residual.data, sampled_prev)};
}

AppearanceFlow upsample_flow(const AppearanceFlow& flow, int factor) {
    if (factor < 1) throw ArgumentError("upsample_flow: factor must be >= 1");
    if (factor == 1) return flow;
    return upsample_flow_to(flow, flow.height() * factor, flow.width() * factor);
}

AppearanceFlow upsample_flow_to(const AppearanceFlow& flow, int out_h, int out_w) {
    int h = flow.height(), w = flow.width();
    if (out_h < 1 || out_w < 1) throw ArgumentError("upsample_flow_to: bad target size");
    double sx = static_cast<double>(out_w) / w;
    double sy = static_cast<double>(out_h) / h;
    Var up = core::upsample_bilinear(flow.data, out_h, out_w);
    Var fx = core::mul_scalar(core::slice_channels(up, 0, 1), sx);
    Var fy = core::mul_scalar(core::slice_channels(up, 1, 2), sy);
    return AppearanceFlow{core::concat_channels({fx, fy})};
}

ImageTensor warp_image(const ImageTensor& image, const AppearanceFlow& flow, WarpMode mode) {
    if (flow.height() != image.height() || flow.width() != image.width())
        throw DimensionError("warp_image: flow dims must equal image spatial dims");
    Tensor out;
    if (mode == WarpMode::nearest) {
        out = core::grid_warp_nearest(image.data, flow.data.value());
    } else {
        out = core::grid_warp(Var::constant(image.data), flow.data).value();
    }
    return ImageTensor{std::move(out), image.range_lo, image.range_hi};
}

Var warp_image_var(const Var& image, const AppearanceFlow& flow) {
    if (flow.height() != image.value().dim(1) || flow.width() != image.value().dim(2))
        throw DimensionError("warp_image: flow dims must equal image spatial dims");
    return core::grid_warp(image, flow.data);
}

}  // namespace tryon::warp
