#ifndef ERQA_PNG_IO_HPP
#define ERQA_PNG_IO_HPP

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "erqa/error.hpp"
#include "erqa/image.hpp"

namespace erqa {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriteGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteGuard() { png_destroy_write_struct(&png, &info); }
};

} // namespace detail

/// Decodes an 8-bit gray or RGB PNG. Gray-alpha and RGBA drop the alpha
/// channel, palette images expand to RGB, bit depths below 8 expand to 8.
/// 16-bit files are rejected.
inline Frame load_frame(const std::string& path) {
    detail::FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file)
        throw IoError("cannot open for reading: " + path);

    png_byte sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw DecodeError("not a PNG file: " + path);

    detail::PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png)
        throw DecodeError("png read struct allocation failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info)
        throw DecodeError("png info struct allocation failed");

    if (setjmp(png_jmpbuf(g.png)))
        throw DecodeError("corrupt PNG stream: " + path);

    png_init_io(g.png, file.get());
    png_set_sig_bytes(g.png, 8);
    png_read_info(g.png, g.info);

    const int bit_depth = png_get_bit_depth(g.png, g.info);
    const int color_type = png_get_color_type(g.png, g.info);
    if (bit_depth == 16)
        throw DecodeError("unsupported bit depth: 16 (" + path + ")");

    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(g.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(g.png);
    if (png_get_valid(g.png, g.info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(g.png);
    png_set_strip_alpha(g.png);
    png_set_interlace_handling(g.png);
    png_read_update_info(g.png, g.info);

    const int width = static_cast<int>(png_get_image_width(g.png, g.info));
    const int height = static_cast<int>(png_get_image_height(g.png, g.info));
    const int channels = png_get_channels(g.png, g.info);
    if (channels != 1 && channels != 3)
        throw DecodeError("unsupported color type: " + std::to_string(color_type) +
                          " decodes to " + std::to_string(channels) + " channels (" +
                          path + ")");
    if (png_get_rowbytes(g.png, g.info) !=
        static_cast<std::size_t>(width) * channels)
        throw DecodeError("unexpected row size in " + path);

    Frame frame(width, height, channels);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] = frame.row(y);
    png_read_image(g.png, rows.data());
    png_read_end(g.png, nullptr);
    return frame;
}

/// Encodes an 8-bit gray or RGB frame as PNG.
inline void save_frame(const std::string& path, const Frame& frame) {
    detail::FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file)
        throw IoError("cannot open for writing: " + path);

    detail::PngWriteGuard g;
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png)
        throw DecodeError("png write struct allocation failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info)
        throw DecodeError("png info struct allocation failed");

    if (setjmp(png_jmpbuf(g.png)))
        throw IoError("png encode failed: " + path);

    png_init_io(g.png, file.get());
    png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(frame.width),
                 static_cast<png_uint_32>(frame.height), 8,
                 frame.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(g.png, g.info);

    std::vector<png_bytep> rows(static_cast<std::size_t>(frame.height));
    for (int y = 0; y < frame.height; ++y)
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(frame.row(y));
    png_write_image(g.png, rows.data());
    png_write_end(g.png, nullptr);
}

} // namespace erqa

#endif // ERQA_PNG_IO_HPP
