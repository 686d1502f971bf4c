#include "tryon/core/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "tryon/core/errors.hpp"

namespace tryon::core {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    (void)png;
    throw tryon::IoError(std::string("libpng: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

}  // namespace

PngImage read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw tryon::IoError("cannot open PNG: " + path);
    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
        throw tryon::IoError("not a PNG file: " + path);

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
    if (!png) throw tryon::IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw tryon::IoError("png_create_info_struct failed");
    }

    PngImage out;
    try {
        png_init_io(png, fp.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);

        png_uint_32 w = 0, h = 0;
        int bit_depth = 0, color_type = 0;
        png_get_IHDR(png, info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);

        if (color_type == PNG_COLOR_TYPE_PALETTE) {
            // Keep indices; expose the palette separately.
            if (bit_depth < 8) png_set_packing(png);
            out.is_palette = true;
            out.channels = 1;
            png_colorp pal = nullptr;
            int n_pal = 0;
            png_get_PLTE(png, info, &pal, &n_pal);
            out.palette.resize(static_cast<size_t>(n_pal));
            for (int i = 0; i < n_pal; ++i)
                out.palette[static_cast<size_t>(i)] = {pal[i].red, pal[i].green, pal[i].blue};
        } else {
            if (bit_depth == 16) png_set_strip_16(png);
            if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
                png_set_expand_gray_1_2_4_to_8(png);
            if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
            if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
            out.channels = (color_type == PNG_COLOR_TYPE_GRAY) ? 1 : 3;
        }
        png_read_update_info(png, info);

        out.width = static_cast<int>(w);
        out.height = static_cast<int>(h);
        size_t rowbytes = png_get_rowbytes(png, info);
        if (rowbytes != static_cast<size_t>(out.width) * out.channels)
            throw tryon::IoError("unexpected PNG row size: " + path);
        out.pixels.resize(rowbytes * h);
        std::vector<png_bytep> rows(h);
        for (png_uint_32 y = 0; y < h; ++y) rows[y] = out.pixels.data() + y * rowbytes;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

static void write_png_impl(const std::string& path, int width, int height, int color_type,
                           const std::vector<uint8_t>& pixels,
                           const std::vector<std::array<uint8_t, 3>>* palette) {
    int channels = (color_type == PNG_COLOR_TYPE_RGB) ? 3 : 1;
    if (pixels.size() != static_cast<size_t>(width) * height * channels)
        throw DimensionError("write_png: pixel buffer size mismatch");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw tryon::IoError("cannot open PNG for writing: " + path);
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
    if (!png) throw tryon::IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw tryon::IoError("png_create_info_struct failed");
    }
    try {
        png_init_io(png, fp.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                     8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        std::vector<png_color> pal;
        if (color_type == PNG_COLOR_TYPE_PALETTE) {
            if (!palette || palette->empty()) throw ArgumentError("write_png: missing palette");
            pal.resize(palette->size());
            for (size_t i = 0; i < palette->size(); ++i)
                pal[i] = {(*palette)[i][0], (*palette)[i][1], (*palette)[i][2]};
            png_set_PLTE(png, info, pal.data(), static_cast<int>(pal.size()));
        }
        png_write_info(png, info);
        std::vector<png_bytep> rows(static_cast<size_t>(height));
        size_t rowbytes = static_cast<size_t>(width) * channels;
        for (int y = 0; y < height; ++y)
            rows[static_cast<size_t>(y)] =
                const_cast<png_bytep>(pixels.data() + static_cast<size_t>(y) * rowbytes);
        png_write_image(png, rows.data());
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
}

void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<uint8_t>& pixels) {
    write_png_impl(path, width, height, PNG_COLOR_TYPE_RGB, pixels, nullptr);
}

void write_png_gray(const std::string& path, int width, int height,
                    const std::vector<uint8_t>& pixels) {
    write_png_impl(path, width, height, PNG_COLOR_TYPE_GRAY, pixels, nullptr);
}

void write_png_indexed(const std::string& path, int width, int height,
                       const std::vector<uint8_t>& indices,
                       const std::vector<std::array<uint8_t, 3>>& palette) {
    write_png_impl(path, width, height, PNG_COLOR_TYPE_PALETTE, indices, &palette);
}

ImageTensor png_to_image(const PngImage& png, double lo, double hi) {
    if (png.is_palette) throw ArgumentError("png_to_image: palette PNG is a label map");
    int c = png.channels;
    Tensor t(Shape{c, png.height, png.width});
    double scale = (hi - lo) / 255.0;
    for (int y = 0; y < png.height; ++y)
        for (int x = 0; x < png.width; ++x)
            for (int ci = 0; ci < c; ++ci)
                t.at(ci, y, x) =
                    lo + scale * png.pixels[(static_cast<size_t>(y) * png.width + x) * c + ci];
    return ImageTensor{std::move(t), lo, hi};
}

PngImage image_to_png(const ImageTensor& img) {
    if (img.channels() != 1 && img.channels() != 3)
        throw DimensionError("image_to_png: expected 1 or 3 channels");
    PngImage out;
    out.width = img.width();
    out.height = img.height();
    out.channels = img.channels();
    out.pixels.resize(static_cast<size_t>(out.width) * out.height * out.channels);
    double scale = 255.0 / (img.range_hi - img.range_lo);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            for (int ci = 0; ci < out.channels; ++ci) {
                double v = (img.data.at(ci, y, x) - img.range_lo) * scale;
                v = std::clamp(v, 0.0, 255.0);
                out.pixels[(static_cast<size_t>(y) * out.width + x) * out.channels + ci] =
                    static_cast<uint8_t>(std::lround(v));
            }
    return out;
}

ImageTensor load_image(const std::string& path, double lo, double hi) {
    return png_to_image(read_png(path), lo, hi);
}

void save_image(const std::string& path, const ImageTensor& img) {
    PngImage png = image_to_png(img);
    if (png.channels == 3)
        write_png_rgb(path, png.width, png.height, png.pixels);
    else
        write_png_gray(path, png.width, png.height, png.pixels);
}

ParseMap load_parse(const std::string& path, int num_classes) {
    PngImage png = read_png(path);
    if (!png.is_palette && png.channels != 1)
        throw tryon::AnnotationError("parse map must be a palette or gray PNG: " + path);
    ParseMap parse;
    parse.width = png.width;
    parse.height = png.height;
    parse.num_classes = num_classes;
    parse.labels.resize(png.pixels.size());
    for (size_t i = 0; i < png.pixels.size(); ++i) parse.labels[i] = png.pixels[i];
    parse.validate();
    return parse;
}

void save_parse(const std::string& path, const ParseMap& parse) {
    parse.validate();
    std::vector<uint8_t> idx(parse.labels.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<uint8_t>(parse.labels[i]);
    // Distinct palette entries so viewers can render label maps.
    std::vector<std::array<uint8_t, 3>> pal(static_cast<size_t>(parse.num_classes));
    for (int i = 0; i < parse.num_classes; ++i) {
        uint8_t v = static_cast<uint8_t>((255 * i) / std::max(1, parse.num_classes - 1));
        pal[static_cast<size_t>(i)] = {v, static_cast<uint8_t>(255 - v),
                                       static_cast<uint8_t>((v * 73) % 256)};
    }
    write_png_indexed(path, parse.width, parse.height, idx, pal);
}

}  // namespace tryon::core
