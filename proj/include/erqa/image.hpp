#ifndef ERQA_IMAGE_HPP
#define ERQA_IMAGE_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "erqa/error.hpp"

namespace erqa {

/// Decoded raster image with 8-bit samples, row-major, interleaved when
/// channels == 3. The unit every metric in this library consumes.
struct Frame {
    int width = 0;
    int height = 0;
    int channels = 1; // 1 = gray, 3 = RGB
    std::vector<std::uint8_t> data;

    Frame() = default;

    Frame(int w, int h, int c, std::vector<std::uint8_t> samples)
        : width(w), height(h), channels(c), data(std::move(samples)) {
        validate();
    }

    /// Zero-filled frame.
    Frame(int w, int h, int c)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
                   static_cast<std::size_t>(c),
               0) {
        validate();
    }

    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    void set(int x, int y, int c, std::uint8_t v) {
        data[(static_cast<std::size_t>(y) * width + x) * channels + c] = v;
    }

    const std::uint8_t* row(int y) const {
        return data.data() + static_cast<std::size_t>(y) * width * channels;
    }

    std::uint8_t* row(int y) {
        return data.data() + static_cast<std::size_t>(y) * width * channels;
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * height;
    }

    bool same_shape(const Frame& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }

private:
    void validate() const {
        if (width <= 0 || height <= 0)
            throw ContractError("frame dimensions must be positive");
        if (channels != 1 && channels != 3)
            throw ContractError("frame must have 1 or 3 channels, got " +
                                std::to_string(channels));
        const std::size_t expected = static_cast<std::size_t>(width) * height * channels;
        if (data.size() != expected)
            throw ContractError("frame data length " + std::to_string(data.size()) +
                                " does not match " + std::to_string(expected));
    }
};

/// Axis-aligned rectangle inside a frame. Used for named crops; the minimum
/// 8x8 size keeps edge detection and shift search meaningful on the crop.
struct Region {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

/// Integer global displacement of distorted content relative to ground truth.
/// Positive dx = content moved right, positive dy = content moved down.
struct ShiftVector {
    int dx = 0;
    int dy = 0;

    bool operator==(const ShiftVector&) const = default;
};

/// Rec. 601 luma with round-half-up, computed in exact integer arithmetic
/// (the weights 0.299/0.587/0.114 are multiples of 1/1000).
inline std::uint8_t luma_of(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int v = (299 * r + 587 * g + 114 * b + 500) / 1000;
    return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

/// Single-plane view of a frame. Gray input is returned unchanged.
inline Frame to_luma(const Frame& frame) {
    if (frame.channels == 1)
        return frame;
    Frame out(frame.width, frame.height, 1);
    const std::uint8_t* src = frame.data.data();
    std::uint8_t* dst = out.data.data();
    const std::size_t n = frame.pixel_count();
    for (std::size_t i = 0; i < n; ++i, src += 3)
        dst[i] = luma_of(src[0], src[1], src[2]);
    return out;
}

/// Copies the samples under `region`. No resampling. Throws GeometryError if
/// the region leaves the frame or is smaller than 8x8.
inline Frame crop(const Frame& frame, const Region& region) {
    if (region.w < 8 || region.h < 8)
        throw GeometryError("crop region must be at least 8x8, got " +
                            std::to_string(region.w) + "x" + std::to_string(region.h));
    if (region.x < 0 || region.y < 0 || region.x + region.w > frame.width ||
        region.y + region.h > frame.height)
        throw GeometryError("crop region (" + std::to_string(region.x) + "," +
                            std::to_string(region.y) + "," + std::to_string(region.w) +
                            "," + std::to_string(region.h) + ") leaves the " +
                            std::to_string(frame.width) + "x" +
                            std::to_string(frame.height) + " frame");
    Frame out(region.w, region.h, frame.channels);
    const int row_bytes = region.w * frame.channels;
    for (int y = 0; y < region.h; ++y) {
        const std::uint8_t* src =
            frame.row(region.y + y) + static_cast<std::size_t>(region.x) * frame.channels;
        std::copy(src, src + row_bytes, out.row(y));
    }
    return out;
}

namespace detail {

// Unchecked rectangular slice; unlike crop() this imposes no minimum size, so
// overlap regions narrower than 8 pixels stay representable.
inline Frame slice(const Frame& frame, int x0, int y0, int w, int h) {
    Frame out(w, h, frame.channels);
    const int row_bytes = w * frame.channels;
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* src =
            frame.row(y0 + y) + static_cast<std::size_t>(x0) * frame.channels;
        std::copy(src, src + row_bytes, out.row(y));
    }
    return out;
}

} // namespace detail

/// Sub-frames of gt and dist on their overlap under the hypothesis that dist
/// is gt translated by `shift`. Both outputs have dimensions
/// (width-|dx|) x (height-|dy|) and are pixel-aligned; no pixels are ever
/// synthesized (padding would spawn phantom gradients at the border).
inline std::pair<Frame, Frame> overlap_pair(const Frame& gt, const Frame& dist,
                                            ShiftVector shift) {
    if (!gt.same_shape(dist))
        throw GeometryError("overlap_pair requires equal dimensions and channels");
    const int adx = std::abs(shift.dx);
    const int ady = std::abs(shift.dy);
    if (adx >= gt.width || ady >= gt.height)
        throw GeometryError("shift (" + std::to_string(shift.dx) + "," +
                            std::to_string(shift.dy) + ") leaves no overlap");
    const int w = gt.width - adx;
    const int h = gt.height - ady;
    // dist(x, y) = gt(x - dx, y - dy) on the overlap
    Frame gt_sub = detail::slice(gt, std::max(0, -shift.dx), std::max(0, -shift.dy), w, h);
    Frame dist_sub = detail::slice(dist, std::max(0, shift.dx), std::max(0, shift.dy), w, h);
    return {std::move(gt_sub), std::move(dist_sub)};
}

} // namespace erqa

#endif // ERQA_IMAGE_HPP
