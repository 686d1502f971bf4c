#pragma once

#include <memory>
#include <vector>

#include "tryon/core/params.hpp"
#include "tryon/warp/ops.hpp"

namespace tryon::warp {

struct WarpConfig {
    int levels = 5;
    std::vector<int> channels = {16, 32, 64, 96, 128};  // per pyramid level
    int cascade_depth = 5;                               // default N
    int corr_radius = 4;
    double fuse_alpha = 1.0;
    double fuse_beta = 1.0;
    bool mre_deformable = true;   // deformable conv in the pyramid blocks
    bool dfen_deformable = true;  // deformable conv in the residual predictors
    int hidden = 32;              // predictor hidden width
    int garment_channels = 3;
    int parse_classes = 13;
    int densepose_channels = 3;
    int person_image_channels = 3;

    int person_channels() const {
        return person_image_channels + densepose_channels + parse_classes;
    }
};

// Pyramid feature extraction: two convs per level, stride 2 between levels.
// Optionally replaces the second conv of each level with a deformable conv
// whose offsets come from a zero-initialized plain conv.
class PyramidExtractor {
public:
    PyramidExtractor(core::ParamStore& store, const std::string& prefix, const WarpConfig& cfg,
                     int in_channels, core::Rng& rng);

    // dense_pose/parse are optional conditioners concatenated before level 0.
    FeaturePyramid extract(const ImageTensor& image, const ImageTensor* dense_pose = nullptr,
                           const ParseMap* parse = nullptr) const;
    FeaturePyramid extract_var(const core::Var& stacked_input) const;

    int in_channels() const { return in_channels_; }

private:
    const WarpConfig& cfg_;
    int in_channels_;
    bool deformable_;
    std::vector<core::Var> c1_w_, c1_b_, c2_w_, c2_b_, off_w_, off_b_;
};

// Predicts a 2-channel flow residual from [prev_flow, features, corr].
class FlowResidualPredictor {
public:
    FlowResidualPredictor(core::ParamStore& store, const std::string& prefix,
                          const WarpConfig& cfg, int feat_channels, core::Rng& rng,
                          bool zero_init_head = true);

    core::Var forward(const AppearanceFlow& prev_flow, const core::Var& features,
                      const CorrelationVolume& corr) const;
    // Same computation with externally supplied deformable offsets (gradient
    // checks treat the offsets as a leaf).
    core::Var forward_with_offsets(const AppearanceFlow& prev_flow, const core::Var& features,
                                   const CorrelationVolume& corr, const core::Var& offsets) const;

    int input_channels() const { return in_channels_; }

private:
    core::Var run(const core::Var& stacked, const core::Var* offsets) const;

    bool deformable_;
    int in_channels_;
    core::Var off_w_, off_b_;
    core::Var w1_, b1_, w2_, b2_, w3_, b3_;
};

struct PersonCondition {
    ImageTensor agnostic;
    ImageTensor dense_pose;
    ParseMap parse;
};

struct CascadeResult {
    AppearanceFlow flow;               // full-resolution flow
    core::Var warped;                  // warped garment (differentiable)
    std::vector<AppearanceFlow> flows; // per-level composed flows, coarse first
};

// Garment/person pyramid streams plus the cascaded refinement.
class WarpModel {
public:
    WarpModel(WarpConfig cfg, uint64_t seed);

    CascadeResult run_cascade(const ImageTensor& garment, const PersonCondition& person,
                              int cascade_depth) const;
    CascadeResult run_cascade(const ImageTensor& garment, const PersonCondition& person) const {
        return run_cascade(garment, person, cfg_.cascade_depth);
    }

    const WarpConfig& config() const { return cfg_; }
    core::ParamStore& params() { return store_; }
    const core::ParamStore& params() const { return store_; }

private:
    WarpConfig cfg_;
    core::ParamStore store_;
    std::unique_ptr<PyramidExtractor> garment_stream_;
    std::unique_ptr<PyramidExtractor> person_stream_;
    std::vector<std::unique_ptr<FlowResidualPredictor>> predictors_;  // per level
    std::vector<core::Var> proj_g_w_, proj_g_b_, proj_p_w_, proj_p_b_;
};

}  // namespace tryon::warp
