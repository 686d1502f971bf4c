#pragma once

#include <cstdint>
#include <vector>

#include "tryon/core/tensor.hpp"

namespace tryon {

// Universal pixel carrier: (channels, H, W) floats within a declared range.
// Model-facing images live in [-1,1]; metric inputs in [0,1].
struct ImageTensor {
    core::Tensor data;  // (c, H, W)
    double range_lo = -1.0;
    double range_hi = 1.0;

    int channels() const { return data.dim(0); }
    int height() const { return data.dim(1); }
    int width() const { return data.dim(2); }

    // Throws DimensionError/ArgumentError on invariant violations.
    void validate() const;
    bool in_range() const;
};

// Per-pixel integer body-part labels.
struct ParseMap {
    std::vector<int> labels;  // row-major H*W
    int height = 0;
    int width = 0;
    int num_classes = 0;

    int at(int y, int x) const { return labels[static_cast<size_t>(y) * width + x]; }
    int& at(int y, int x) { return labels[static_cast<size_t>(y) * width + x]; }
    void validate() const;
};

// One-hot encode a parse map into (num_classes, H, W).
core::Tensor one_hot_parse(const ParseMap& parse);

ImageTensor make_image(core::Tensor data, double lo, double hi);
ImageTensor constant_image(int channels, int h, int w, double value, double lo, double hi);

// Linear range remapping, e.g. [-1,1] -> [0,1].
ImageTensor convert_range(const ImageTensor& img, double lo, double hi);

// Bilinear / nearest resize of the pixel data (no displacement semantics).
ImageTensor resize_image(const ImageTensor& img, int out_h, int out_w, bool bilinear = true);
ParseMap resize_parse(const ParseMap& parse, int out_h, int out_w);

}  // namespace tryon
