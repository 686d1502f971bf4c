#include "tryon/warp/model.hpp"

#include <cmath>

#include "tryon/core/errors.hpp"

namespace tryon::warp {

using core::Rng;
using core::Tensor;
using core::Var;

PyramidExtractor::PyramidExtractor(core::ParamStore& store, const std::string& prefix,
                                   const WarpConfig& cfg, int in_channels, Rng& rng)
    : cfg_(cfg), in_channels_(in_channels), deformable_(cfg.mre_deformable) {
    int cin = in_channels;
    for (int l = 0; l < cfg.levels; ++l) {
        int cout = cfg.channels[static_cast<size_t>(l)];
        std::string p = prefix + ".l" + std::to_string(l);
        c1_w_.push_back(store.create(p + ".c1.w", core::kaiming_conv_init(rng, cout, cin, 3)));
        c1_b_.push_back(store.create(p + ".c1.b", Tensor::zeros({cout})));
        c2_w_.push_back(store.create(p + ".c2.w", core::kaiming_conv_init(rng, cout, cout, 3)));
        c2_b_.push_back(store.create(p + ".c2.b", Tensor::zeros({cout})));
        if (deformable_) {
            off_w_.push_back(store.create(p + ".off.w", Tensor::zeros({18, cout, 3, 3})));
            off_b_.push_back(store.create(p + ".off.b", Tensor::zeros({18})));
        }
        cin = cout;
    }
}

FeaturePyramid PyramidExtractor::extract(const ImageTensor& image, const ImageTensor* dense_pose,
                                         const ParseMap* parse) const {
    int h = image.height(), w = image.width();
    std::vector<Var> parts{Var::constant(image.data)};
    if (dense_pose) {
        if (dense_pose->height() != h || dense_pose->width() != w)
            throw DimensionError("extract_pyramid: dense pose dims differ from image");
        parts.push_back(Var::constant(dense_pose->data));
    }
    if (parse) {
        if (parse->height != h || parse->width != w)
            throw DimensionError("extract_pyramid: parse dims differ from image");
        parts.push_back(Var::constant(one_hot_parse(*parse)));
    }
    Var stacked = parts.size() == 1 ? parts[0] : core::concat_channels(parts);
    return extract_var(stacked);
}

FeaturePyramid PyramidExtractor::extract_var(const Var& stacked_input) const {
    if (stacked_input.value().dim(0) != in_channels_)
        throw DimensionError("extract_pyramid: expected " + std::to_string(in_channels_) +
                             " input channels, got " +
                             std::to_string(stacked_input.value().dim(0)));
    FeaturePyramid pyr;
    Var x = stacked_input;
    for (int l = 0; l < cfg_.levels; ++l) {
        int stride = l == 0 ? 1 : 2;
        Var h = core::leaky_relu(core::conv2d(x, c1_w_[l], c1_b_[l], stride), 0.1);
        Var h2;
        if (deformable_) {
            Var offsets = core::conv2d(h, off_w_[l], off_b_[l], 1);
            h2 = core::deform_conv2d(h, c2_w_[l], c2_b_[l], offsets);
        } else {
            h2 = core::conv2d(h, c2_w_[l], c2_b_[l], 1);
        }
        x = core::leaky_relu(h2, 0.1);
        pyr.levels.push_back(x);
    }
    pyr.low_index = 0;
    pyr.high_index = cfg_.levels - 1;
    pyr.validate();
    return pyr;
}

FlowResidualPredictor::FlowResidualPredictor(core::ParamStore& store, const std::string& prefix,
                                             const WarpConfig& cfg, int feat_channels, Rng& rng,
                                             bool zero_init_head)
    : deformable_(cfg.dfen_deformable) {
    int side = 2 * cfg.corr_radius + 1;
    in_channels_ = 2 + feat_channels + side * side;
    int hidden = cfg.hidden;
    if (deformable_) {
        off_w_ = store.create(prefix + ".off.w", Tensor::zeros({18, in_channels_, 3, 3}));
        off_b_ = store.create(prefix + ".off.b", Tensor::zeros({18}));
    }
    w1_ = store.create(prefix + ".c1.w", core::kaiming_conv_init(rng, hidden, in_channels_, 3));
    b1_ = store.create(prefix + ".c1.b", Tensor::zeros({hidden}));
    w2_ = store.create(prefix + ".c2.w", core::kaiming_conv_init(rng, hidden, hidden, 3));
    b2_ = store.create(prefix + ".c2.b", Tensor::zeros({hidden}));
    Tensor head = zero_init_head ? Tensor::zeros({2, hidden, 3, 3})
                                 : core::kaiming_conv_init(rng, 2, hidden, 3, 0.01);
    w3_ = store.create(prefix + ".c3.w", std::move(head));
    b3_ = store.create(prefix + ".c3.b", Tensor::zeros({2}));
}

Var FlowResidualPredictor::run(const Var& stacked, const Var* offsets) const {
    Var h1;
    if (deformable_) {
        Var off = offsets ? *offsets : core::conv2d(stacked, off_w_, off_b_, 1);
        h1 = core::deform_conv2d(stacked, w1_, b1_, off);
    } else {
        if (offsets) throw ArgumentError("predict_flow_residual: plain predictor takes no offsets");
        h1 = core::conv2d(stacked, w1_, b1_, 1);
    }
    Var h2 = core::leaky_relu(core::conv2d(core::leaky_relu(h1, 0.1), w2_, b2_, 1), 0.1);
    return core::conv2d(h2, w3_, b3_, 1);
}

static Var stack_predictor_input(const AppearanceFlow& prev_flow, const Var& features,
                                 const CorrelationVolume& corr, int expected_channels) {
    int h = prev_flow.height(), w = prev_flow.width();
    if (features.value().dim(1) != h || features.value().dim(2) != w ||
        corr.data.value().dim(1) != h || corr.data.value().dim(2) != w)
        throw DimensionError("predict_flow_residual: inputs must share the level's spatial dims");
    Var stacked = core::concat_channels({prev_flow.data, features, corr.data});
    if (stacked.value().dim(0) != expected_channels)
        throw DimensionError("predict_flow_residual: expected " +
                             std::to_string(expected_channels) + " channels, got " +
                             std::to_string(stacked.value().dim(0)));
    return stacked;
}

Var FlowResidualPredictor::forward(const AppearanceFlow& prev_flow, const Var& features,
                                   const CorrelationVolume& corr) const {
    return run(stack_predictor_input(prev_flow, features, corr, in_channels_), nullptr);
}

Var FlowResidualPredictor::forward_with_offsets(const AppearanceFlow& prev_flow,
                                                const Var& features, const CorrelationVolume& corr,
                                                const Var& offsets) const {
    return run(stack_predictor_input(prev_flow, features, corr, in_channels_), &offsets);
}

WarpModel::WarpModel(WarpConfig cfg, uint64_t seed) : cfg_(std::move(cfg)) {
    if (static_cast<int>(cfg_.channels.size()) != cfg_.levels)
        throw ArgumentError("WarpConfig: channels list must match level count");
    if (cfg_.cascade_depth < 1 || cfg_.cascade_depth > cfg_.levels)
        throw ArgumentError("WarpConfig: cascade depth must be in [1, levels]");
    Rng rng(seed);
    garment_stream_ = std::make_unique<PyramidExtractor>(store_, "garment", cfg_,
                                                         cfg_.garment_channels, rng);
    person_stream_ =
        std::make_unique<PyramidExtractor>(store_, "person", cfg_, cfg_.person_channels(), rng);
    int c_high = cfg_.channels.back();
    for (int l = 0; l < cfg_.levels; ++l) {
        int c_l = cfg_.channels[static_cast<size_t>(l)];
        // Features at a cascade level: warped garment + person, both c_l wide.
        predictors_.push_back(std::make_unique<FlowResidualPredictor>(
            store_, "flow.l" + std::to_string(l), cfg_, 2 * c_l, rng));
        proj_g_w_.push_back(
            store_.create("fuse.g.l" + std::to_string(l) + ".w",
                          core::kaiming_conv_init(rng, c_l, c_high, 1)));
        proj_g_b_.push_back(
            store_.create("fuse.g.l" + std::to_string(l) + ".b", Tensor::zeros({c_l})));
        proj_p_w_.push_back(
            store_.create("fuse.p.l" + std::to_string(l) + ".w",
                          core::kaiming_conv_init(rng, c_l, c_high, 1)));
        proj_p_b_.push_back(
            store_.create("fuse.p.l" + std::to_string(l) + ".b", Tensor::zeros({c_l})));
    }
}

CascadeResult WarpModel::run_cascade(const ImageTensor& garment, const PersonCondition& person,
                                     int cascade_depth) const {
    if (cascade_depth < 1 || cascade_depth > cfg_.levels)
        throw ArgumentError("run_cascade: N must be in [1, pyramid depth]");
    if (person.agnostic.height() != garment.height() ||
        person.agnostic.width() != garment.width())
        throw DimensionError("run_cascade: garment and person dims differ");

    FeaturePyramid g_pyr = garment_stream_->extract(garment);
    FeaturePyramid p_pyr =
        person_stream_->extract(person.agnostic, &person.dense_pose, &person.parse);

    int finest = cfg_.levels - cascade_depth;
    int high = cfg_.levels - 1;

    // Fuse fine and coarse representations at the finest cascade level.
    auto fused = [&](const FeaturePyramid& pyr, const std::vector<Var>& pw,
                     const std::vector<Var>& pb, int level) {
        const Var& f_low = pyr.levels[static_cast<size_t>(level)];
        Var up = core::upsample_bilinear(pyr.levels[static_cast<size_t>(high)],
                                         f_low.value().dim(1), f_low.value().dim(2));
        Var proj = core::conv2d(up, pw[static_cast<size_t>(level)], pb[static_cast<size_t>(level)], 1);
        return fuse_features(f_low, proj, cfg_.fuse_alpha, cfg_.fuse_beta);
    };
    Var g_finest = fused(g_pyr, proj_g_w_, proj_g_b_, finest);
    Var p_finest = fused(p_pyr, proj_p_w_, proj_p_b_, finest);

    CascadeResult result;
    AppearanceFlow flow = AppearanceFlow::zeros(
        g_pyr.levels[static_cast<size_t>(high)].value().dim(1),
        g_pyr.levels[static_cast<size_t>(high)].value().dim(2));
    for (int l = high; l >= finest; --l) {
        const Var& g_feat = (l == finest) ? g_finest : g_pyr.levels[static_cast<size_t>(l)];
        const Var& p_feat = (l == finest) ? p_finest : p_pyr.levels[static_cast<size_t>(l)];
        if (l != high)
            flow = upsample_flow_to(flow, g_feat.value().dim(1), g_feat.value().dim(2));
        Var warped_g = core::grid_warp(g_feat, flow.data);
        CorrelationVolume corr = local_correlation(warped_g, p_feat, cfg_.corr_radius);
        Var feats = core::concat_channels({warped_g, p_feat});
        Var residual = predictors_[static_cast<size_t>(l)]->forward(flow, feats, corr);
        flow = compose_flow(flow, AppearanceFlow{residual});
        result.flows.push_back(flow);
    }
    if (flow.height() != garment.height() || flow.width() != garment.width())
        flow = upsample_flow_to(flow, garment.height(), garment.width());
    result.flow = flow;
    result.warped = core::grid_warp(Var::constant(garment.data), flow.data);
    return result;
}

}  // namespace tryon::warp
