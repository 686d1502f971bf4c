#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tryon/core/image.hpp"

namespace tryon::core {

// Decoded 8-bit PNG. Palette images keep their index plane (channels == 1,
// is_palette == true) so label maps round-trip exactly.
struct PngImage {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (gray or palette index), 3 (rgb)
    bool is_palette = false;
    std::vector<uint8_t> pixels;                   // interleaved, row-major
    std::vector<std::array<uint8_t, 3>> palette;   // when is_palette
};

PngImage read_png(const std::string& path);
void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<uint8_t>& pixels);
void write_png_gray(const std::string& path, int width, int height,
                    const std::vector<uint8_t>& pixels);
void write_png_indexed(const std::string& path, int width, int height,
                       const std::vector<uint8_t>& indices,
                       const std::vector<std::array<uint8_t, 3>>& palette);

// Convert between 8-bit pixel planes and float ImageTensors.
ImageTensor png_to_image(const PngImage& png, double lo, double hi);
PngImage image_to_png(const ImageTensor& img);

ImageTensor load_image(const std::string& path, double lo = -1.0, double hi = 1.0);
void save_image(const std::string& path, const ImageTensor& img);

ParseMap load_parse(const std::string& path, int num_classes);
void save_parse(const std::string& path, const ParseMap& parse);

}  // namespace tryon::core
