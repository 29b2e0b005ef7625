#ifndef ERQA_SHIFT_HPP
#define ERQA_SHIFT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "erqa/error.hpp"
#include "erqa/image.hpp"

namespace erqa {

/// PSNR in decibels. A perfect match (MSE = 0) is the distinguished infinite
/// value, which compares greater than every finite PSNR.
struct PsnrValue {
    double db = 0.0;

    static PsnrValue infinite() {
        return {std::numeric_limits<double>::infinity()};
    }
    bool is_infinite() const { return std::isinf(db); }
    auto operator<=>(const PsnrValue&) const = default;
};

/// MSE-based PSNR for 8-bit single-channel frames (MAX = 255).
inline PsnrValue psnr(const Frame& a, const Frame& b) {
    if (!a.same_shape(b))
        throw GeometryError("psnr requires equal dimensions and channels");
    if (a.channels != 1)
        throw ContractError("psnr operates on single-channel frames; call to_luma first");
    std::uint64_t sq_sum = 0;
    const std::size_t n = a.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int d = static_cast<int>(a.data[i]) - static_cast<int>(b.data[i]);
        sq_sum += static_cast<std::uint64_t>(d * d);
    }
    if (sq_sum == 0)
        return PsnrValue::infinite();
    const double mse = static_cast<double>(sq_sum) / static_cast<double>(n);
    return {10.0 * std::log10(255.0 * 255.0 / mse)};
}

/// Outcome of the exhaustive integer-shift search: the chosen shift, its PSNR
/// and the full (2*radius+1)^2 PSNR grid for diagnostics.
struct ShiftSearchResult {
    ShiftVector shift;
    PsnrValue psnr;
    int radius = 3;
    std::vector<PsnrValue> grid; // row-major, indexed [dy+radius][dx+radius]

    const PsnrValue& grid_at(int dx, int dy) const {
        const int side = 2 * radius + 1;
        return grid[static_cast<std::size_t>(dy + radius) * side + (dx + radius)];
    }
};

namespace detail {

// PSNR on the overlap of two equal-size luma planes under the given shift,
// without materializing the crops. Identical arithmetic to
// psnr(overlap_pair(gt, dist, shift)): same integer squared sum, same count.
inline PsnrValue overlap_psnr(const Frame& gt, const Frame& dist, int dx, int dy) {
    const int w = gt.width - std::abs(dx);
    const int h = gt.height - std::abs(dy);
    const int gx0 = std::max(0, -dx);
    const int gy0 = std::max(0, -dy);
    const int dx0 = std::max(0, dx);
    const int dy0 = std::max(0, dy);
    std::uint64_t sq_sum = 0;
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* g = gt.row(gy0 + y) + gx0;
        const std::uint8_t* d = dist.row(dy0 + y) + dx0;
        for (int x = 0; x < w; ++x) {
            const int delta = static_cast<int>(g[x]) - static_cast<int>(d[x]);
            sq_sum += static_cast<std::uint64_t>(delta * delta);
        }
    }
    if (sq_sum == 0)
        return PsnrValue::infinite();
    const double mse =
        static_cast<double>(sq_sum) / (static_cast<double>(w) * static_cast<double>(h));
    return {10.0 * std::log10(255.0 * 255.0 / mse)};
}

} // namespace detail

/// Exhaustive search over integer shifts in [-radius, radius]^2 maximizing
/// PSNR between the luma planes of gt and the shifted distorted frame, each
/// candidate evaluated on its own overlap region. Ties break toward the
/// smallest |dx|+|dy|, then smallest dy, then smallest dx.
inline ShiftSearchResult find_global_shift(const Frame& gt, const Frame& dist,
                                           int radius = 3) {
    if (gt.width != dist.width || gt.height != dist.height)
        throw GeometryError("find_global_shift requires equal dimensions");
    if (radius < 0)
        throw ContractError("shift radius must be non-negative");
    if (gt.width <= 2 * radius + 8 || gt.height <= 2 * radius + 8)
        throw GeometryError("frames " + std::to_string(gt.width) + "x" +
                            std::to_string(gt.height) + " too small for shift radius " +
                            std::to_string(radius));

    const Frame gt_luma = to_luma(gt);
    const Frame dist_luma = to_luma(dist);

    const int side = 2 * radius + 1;
    ShiftSearchResult result;
    result.radius = radius;
    result.grid.resize(static_cast<std::size_t>(side) * side);

    bool first = true;
    ShiftVector best;
    PsnrValue best_psnr;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            const PsnrValue v = detail::overlap_psnr(gt_luma, dist_luma, dx, dy);
            result.grid[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] = v;
            const bool better =
                first || v > best_psnr ||
                (v == best_psnr &&
                 (std::abs(dx) + std::abs(dy) < std::abs(best.dx) + std::abs(best.dy) ||
                  (std::abs(dx) + std::abs(dy) == std::abs(best.dx) + std::abs(best.dy) &&
                   (dy < best.dy || (dy == best.dy && dx < best.dx)))));
            if (better) {
                first = false;
                best = {dx, dy};
                best_psnr = v;
            }
        }
    result.shift = best;
    result.psnr = best_psnr;
    return result;
}

/// Runs the global shift search, then applies `metric` to the overlap pair.
/// With a winning shift of (0,0) this equals the uncompensated metric exactly.
template <typename Metric>
auto score_with_compensation(Metric&& metric, const Frame& gt, const Frame& dist,
                             int radius = 3) {
    const ShiftSearchResult search = find_global_shift(gt, dist, radius);
    auto [g, d] = overlap_pair(gt, dist, search.shift);
    return metric(g, d);
}

} // namespace erqa

#endif // ERQA_SHIFT_HPP
