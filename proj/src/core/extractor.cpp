#include "tryon/core/extractor.hpp"

#include "tryon/core/params.hpp"

namespace tryon::core {

Tensor FeatureExtractor::descriptor(const Tensor& image) const {
    std::vector<Tensor> maps = features(image);
    const Tensor& last = maps.back();
    int c = last.dim(0), h = last.dim(1), w = last.dim(2);
    Tensor out(Shape{c});
    for (int ci = 0; ci < c; ++ci) {
        double acc = 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) acc += last.at(ci, y, x);
        out[ci] = acc / (h * w);
    }
    return out;
}

RandomConvExtractor::RandomConvExtractor(uint64_t seed, int in_channels, std::vector<int> widths,
                                         int kernel)
    : seed_(seed), in_channels_(in_channels), widths_(std::move(widths)) {
    Rng rng(seed);
    int cin = in_channels_;
    for (int width : widths_) {
        weights_.push_back(kaiming_conv_init(rng, width, cin, kernel));
        biases_.push_back(Tensor::zeros({width}));
        cin = width;
    }
}

std::vector<Tensor> RandomConvExtractor::features(const Tensor& image) const {
    std::vector<Tensor> out;
    Tensor x = image;
    for (size_t l = 0; l < weights_.size(); ++l) {
        Tensor y = conv2d_forward(x, weights_[l], biases_[l], 2);
        for (int i = 0; i < y.numel(); ++i) y[i] = y[i] > 0 ? y[i] : 0.1 * y[i];
        out.push_back(y);
        x = std::move(y);
    }
    return out;
}

std::vector<Var> RandomConvExtractor::features_var(const Var& image) const {
    std::vector<Var> out;
    Var x = image;
    for (size_t l = 0; l < weights_.size(); ++l) {
        Var y = leaky_relu(conv2d(x, Var::constant(weights_[l]), Var::constant(biases_[l]), 2), 0.1);
        out.push_back(y);
        x = y;
    }
    return out;
}

}  // namespace tryon::core
