#include "tryon/core/image.hpp"

#include <algorithm>
#include <cmath>

#include "tryon/core/autograd.hpp"
#include "tryon/core/errors.hpp"

namespace tryon {

using core::Tensor;

void ImageTensor::validate() const {
    if (data.ndim() != 3) throw DimensionError("ImageTensor: expected (c,H,W)");
    if (data.dim(1) < 1 || data.dim(2) < 1) throw DimensionError("ImageTensor: H,W must be >= 1");
    if (range_lo >= range_hi) throw ArgumentError("ImageTensor: empty value range");
    if (!data.all_finite()) throw ArgumentError("ImageTensor: non-finite values");
    if (!in_range()) throw ArgumentError("ImageTensor: values outside declared range");
}

bool ImageTensor::in_range() const {
    const double eps = 1e-9;
    for (int i = 0; i < data.numel(); ++i)
        if (data[i] < range_lo - eps || data[i] > range_hi + eps) return false;
    return true;
}

void ParseMap::validate() const {
    if (height < 1 || width < 1) throw DimensionError("ParseMap: H,W must be >= 1");
    if (static_cast<int>(labels.size()) != height * width)
        throw DimensionError("ParseMap: label buffer size mismatch");
    for (int l : labels)
        if (l < 0 || l >= num_classes) throw ArgumentError("ParseMap: label out of range");
}

Tensor one_hot_parse(const ParseMap& parse) {
    parse.validate();
    Tensor out(core::Shape{parse.num_classes, parse.height, parse.width});
    for (int y = 0; y < parse.height; ++y)
        for (int x = 0; x < parse.width; ++x) out.at(parse.at(y, x), y, x) = 1.0;
    return out;
}

ImageTensor make_image(Tensor data, double lo, double hi) {
    ImageTensor img{std::move(data), lo, hi};
    img.validate();
    return img;
}

ImageTensor constant_image(int channels, int h, int w, double value, double lo, double hi) {
    return make_image(Tensor::full({channels, h, w}, value), lo, hi);
}

ImageTensor convert_range(const ImageTensor& img, double lo, double hi) {
    double scale = (hi - lo) / (img.range_hi - img.range_lo);
    Tensor out(img.data.shape());
    for (int i = 0; i < out.numel(); ++i) out[i] = lo + (img.data[i] - img.range_lo) * scale;
    // Clamp rounding spill at the interval ends.
    for (int i = 0; i < out.numel(); ++i) out[i] = std::clamp(out[i], lo, hi);
    return ImageTensor{std::move(out), lo, hi};
}

ImageTensor resize_image(const ImageTensor& img, int out_h, int out_w, bool bilinear) {
    if (out_h < 1 || out_w < 1) throw ArgumentError("resize_image: bad output size");
    if (img.height() == out_h && img.width() == out_w) return img;
    Tensor out;
    if (bilinear) {
        out = core::upsample_bilinear_forward(img.data, out_h, out_w);
        for (int i = 0; i < out.numel(); ++i)
            out[i] = std::clamp(out[i], img.range_lo, img.range_hi);
    } else {
        int c = img.channels(), h = img.height(), w = img.width();
        out = Tensor(core::Shape{c, out_h, out_w});
        for (int oy = 0; oy < out_h; ++oy)
            for (int ox = 0; ox < out_w; ++ox) {
                int sy = std::min(h - 1, static_cast<int>(oy * static_cast<int64_t>(h) / out_h));
                int sx = std::min(w - 1, static_cast<int>(ox * static_cast<int64_t>(w) / out_w));
                for (int ci = 0; ci < c; ++ci) out.at(ci, oy, ox) = img.data.at(ci, sy, sx);
            }
    }
    return ImageTensor{std::move(out), img.range_lo, img.range_hi};
}

ParseMap resize_parse(const ParseMap& parse, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw ArgumentError("resize_parse: bad output size");
    if (parse.height == out_h && parse.width == out_w) return parse;
    ParseMap out;
    out.height = out_h;
    out.width = out_w;
    out.num_classes = parse.num_classes;
    out.labels.resize(static_cast<size_t>(out_h) * out_w);
    for (int oy = 0; oy < out_h; ++oy)
        for (int ox = 0; ox < out_w; ++ox) {
            int sy = std::min(parse.height - 1,
                              static_cast<int>(oy * static_cast<int64_t>(parse.height) / out_h));
            int sx = std::min(parse.width - 1,
                              static_cast<int>(ox * static_cast<int64_t>(parse.width) / out_w));
            out.at(oy, ox) = parse.at(sy, sx);
        }
    return out;
}

}  // namespace tryon
