#ifndef ERQA_CANNY_HPP
#define ERQA_CANNY_HPP

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "erqa/error.hpp"
#include "erqa/image.hpp"

namespace erqa {

/// Binary per-pixel edge mask. mask[y*width + x] is 1 for edge pixels.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;

    EdgeMap() = default;
    EdgeMap(int w, int h)
        : width(w), height(h),
          mask(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

    bool at(int x, int y) const {
        return mask[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v) {
        mask[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }
    std::int64_t edge_count() const {
        std::int64_t n = 0;
        for (std::uint8_t v : mask) n += v;
        return n;
    }
    bool same_shape(const EdgeMap& o) const {
        return width == o.width && height == o.height;
    }
    bool operator==(const EdgeMap&) const = default;
};

enum class MagnitudeNorm { L1, L2 };

/// Detector configuration. Thresholds are in gradient-magnitude units; with
/// the default L1 norm the magnitude of a 3x3 Sobel pair is |dx|+|dy|, which
/// is the scale the default 100/200 thresholds are calibrated on.
struct CannyParams {
    int low_threshold = 100;
    int high_threshold = 200;
    MagnitudeNorm norm = MagnitudeNorm::L1;
    // 5-tap binomial blur before differentiation. Off by default: the
    // detector is normally fed decoded frames directly and smoothing is the
    // caller's choice.
    bool pre_smooth = false;
};

namespace detail {

inline void validate_canny_params(const CannyParams& p) {
    if (p.low_threshold <= 0 || p.low_threshold > p.high_threshold)
        throw ContractError("canny thresholds must satisfy 0 < low <= high, got low=" +
                            std::to_string(p.low_threshold) +
                            " high=" + std::to_string(p.high_threshold));
}

// Separable [1 4 6 4 1]/16 blur with replicated borders, exact integer
// rounding (divide by 256 once after both passes).
inline std::vector<std::uint8_t> binomial_blur_5(const std::uint8_t* src, int w, int h) {
    auto clampi = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
    static constexpr int kTap[5] = {1, 4, 6, 4, 1};
    std::vector<int> tmp(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int acc = 0;
            for (int k = -2; k <= 2; ++k)
                acc += kTap[k + 2] * src[static_cast<std::size_t>(y) * w + clampi(x + k, 0, w - 1)];
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int acc = 0;
            for (int k = -2; k <= 2; ++k)
                acc += kTap[k + 2] * tmp[static_cast<std::size_t>(clampi(y + k, 0, h - 1)) * w + x];
            out[static_cast<std::size_t>(y) * w + x] =
                static_cast<std::uint8_t>((acc + 128) >> 8);
        }
    return out;
}

} // namespace detail

/// Canny edge detection on a single-channel frame.
///
/// Pipeline (all integer arithmetic, bit-reproducible):
///  1. 3x3 Sobel derivatives dx, dy with replicated borders.
///  2. Magnitude: |dx|+|dy| (L1, default) or dx^2+dy^2 compared against
///     squared thresholds (L2); sector selection always uses dx, dy directly.
///  3. Non-maximum suppression. The gradient direction is quantized to four
///     sectors by comparing |dy|*2^15 against |dx|*13573 (tan 22.5 deg) and
///     |dx|*79109 (tan 67.5 deg). A pixel is kept when its magnitude exceeds
///     the neighbor on one side of the quantized direction and is >= the
///     neighbor on the other (horizontal: > left, >= right; vertical:
///     > above, >= below; diagonal: > both), so exactly one pixel of an
///     equal-magnitude two-pixel plateau survives. Out-of-frame neighbors
///     count as magnitude zero.
///  4. Hysteresis: pixels with magnitude > high seed the edge set; surviving
///     pixels with magnitude > low join when 8-connected to a seed through
///     other surviving above-low pixels.
///
/// The behaviour matches cv::Canny with apertureSize 3 at the same thresholds.
inline EdgeMap detect_edges(const Frame& frame, const CannyParams& params = {}) {
    if (frame.channels != 1)
        throw ContractError("detect_edges requires a single-channel frame; call to_luma first");
    if (frame.width < 8 || frame.height < 8)
        throw ContractError("detect_edges requires at least 8x8 input, got " +
                            std::to_string(frame.width) + "x" + std::to_string(frame.height));
    detail::validate_canny_params(params);

    const int w = frame.width;
    const int h = frame.height;
    const std::uint8_t* pix = frame.data.data();
    std::vector<std::uint8_t> smoothed;
    if (params.pre_smooth) {
        smoothed = detail::binomial_blur_5(pix, w, h);
        pix = smoothed.data();
    }

    std::vector<int> gx(static_cast<std::size_t>(w) * h);
    std::vector<int> gy(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* up = pix + static_cast<std::size_t>(y > 0 ? y - 1 : 0) * w;
        const std::uint8_t* mid = pix + static_cast<std::size_t>(y) * w;
        const std::uint8_t* down = pix + static_cast<std::size_t>(y < h - 1 ? y + 1 : y) * w;
        const std::size_t base = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            const int xl = x > 0 ? x - 1 : 0;
            const int xr = x < w - 1 ? x + 1 : x;
            const int a = up[xl], b = up[x], c = up[xr];
            const int d = mid[xl], e = mid[xr];
            const int f = down[xl], g = down[x], k = down[xr];
            gx[base + x] = (c + 2 * e + k) - (a + 2 * d + f);
            gy[base + x] = (f + 2 * g + k) - (a + 2 * b + c);
        }
    }

    // Magnitude with a one-pixel zero border so NMS never branches on bounds.
    const bool l2 = params.norm == MagnitudeNorm::L2;
    const int mw = w + 2;
    std::vector<std::int64_t> mag(static_cast<std::size_t>(mw) * (h + 2), 0);
    auto m = [&](int x, int y) -> std::int64_t& {
        return mag[static_cast<std::size_t>(y + 1) * mw + (x + 1)];
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            m(x, y) = l2 ? static_cast<std::int64_t>(gx[i]) * gx[i] +
                               static_cast<std::int64_t>(gy[i]) * gy[i]
                         : std::abs(gx[i]) + std::abs(gy[i]);
        }

    const std::int64_t low = l2 ? static_cast<std::int64_t>(params.low_threshold) *
                                      params.low_threshold
                                : params.low_threshold;
    const std::int64_t high = l2 ? static_cast<std::int64_t>(params.high_threshold) *
                                       params.high_threshold
                                 : params.high_threshold;

    // 0 = not a candidate, 1 = weak candidate, 2 = edge
    constexpr int kTan22 = 13573; // tan(22.5 deg) * 2^15
    constexpr int kTan67 = 79109; // tan(67.5 deg) * 2^15
    std::vector<std::uint8_t> state(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::int32_t> stack;
    stack.reserve(1024);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const std::int64_t mv = m(x, y);
            if (mv <= low)
                continue;
            const int dx = gx[i];
            const int dy = gy[i];
            const std::int64_t ax = std::abs(dx);
            const std::int64_t ay15 = static_cast<std::int64_t>(std::abs(dy)) << 15;
            bool keep;
            if (ay15 < ax * kTan22) {
                keep = mv > m(x - 1, y) && mv >= m(x + 1, y);
            } else if (ay15 > ax * kTan67) {
                keep = mv > m(x, y - 1) && mv >= m(x, y + 1);
            } else {
                const int s = ((dx ^ dy) < 0) ? -1 : 1;
                keep = mv > m(x - s, y - 1) && mv > m(x + s, y + 1);
            }
            if (!keep)
                continue;
            if (mv > high) {
                state[i] = 2;
                stack.push_back(static_cast<std::int32_t>(i));
            } else {
                state[i] = 1;
            }
        }

    while (!stack.empty()) {
        const std::int32_t i = stack.back();
        stack.pop_back();
        const int x = i % w;
        const int y = i / w;
        for (int ny = y - 1; ny <= y + 1; ++ny)
            for (int nx = x - 1; nx <= x + 1; ++nx) {
                if (nx < 0 || ny < 0 || nx >= w || ny >= h)
                    continue;
                const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                if (state[j] == 1) {
                    state[j] = 2;
                    stack.push_back(static_cast<std::int32_t>(j));
                }
            }
    }

    EdgeMap out(w, h);
    for (std::size_t i = 0; i < state.size(); ++i)
        out.mask[i] = state[i] == 2 ? 1 : 0;
    return out;
}

/// 0/255 single-channel frame for PNG export of an edge map.
inline Frame edge_map_to_frame(const EdgeMap& map) {
    Frame out(map.width, map.height, 1);
    for (std::size_t i = 0; i < map.mask.size(); ++i)
        out.data[i] = map.mask[i] ? 255 : 0;
    return out;
}

} // namespace erqa

#endif // ERQA_CANNY_HPP
