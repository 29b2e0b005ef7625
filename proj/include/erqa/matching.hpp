#ifndef ERQA_MATCHING_HPP
#define ERQA_MATCHING_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "erqa/canny.hpp"
#include "erqa/error.hpp"
#include "erqa/image.hpp"
#include "erqa/shift.hpp"

namespace erqa {

enum class ErqaVersion { v1_0, v1_1 };

inline std::string to_string(ErqaVersion v) {
    return v == ErqaVersion::v1_0 ? "1.0" : "1.1";
}

/// Full metric configuration. The four ablation stages are reproduced by
/// toggling enable_global_shift / enable_local_tolerance / version.
struct ErqaConfig {
    ErqaVersion version = ErqaVersion::v1_1;
    bool enable_global_shift = true;
    bool enable_local_tolerance = true;
    int shift_radius = 3;
    CannyParams canny{};
};

inline void validate(const ErqaConfig& config) {
    if (config.version == ErqaVersion::v1_1 && !config.enable_local_tolerance)
        throw ContractError("v1.1 requires local tolerance: the one-to-one rule "
                            "refines the tolerant matching and is meaningless without it");
    if (config.shift_radius < 0)
        throw ContractError("shift radius must be non-negative");
    detail::validate_canny_params(config.canny);
}

/// Per-pixel outcome of edge matching.
enum class PixelLabel : std::uint8_t { none = 0, tp = 1, fp = 2, fn = 3 };

struct EdgeMatchResult {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int width = 0;
    int height = 0;
    std::vector<PixelLabel> classification; // row-major, width*height

    PixelLabel label_at(int x, int y) const {
        return classification[static_cast<std::size_t>(y) * width + x];
    }
};

struct F1Scores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Precision, recall and F1 from raw counts. Degenerate conventions: a vacuous
/// denominator yields precision/recall 1 (an empty map compared against an
/// empty map is a perfect restoration, so tp=fp=fn=0 gives f1=1), and
/// precision+recall = 0 gives f1 = 0.
inline F1Scores f1_score(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
    if (tp < 0 || fp < 0 || fn < 0)
        throw ContractError("f1_score counts must be non-negative");
    F1Scores s;
    s.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
    s.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

namespace detail {

// Neighbor scan order for the v1.1 second pass: N, S, W, E, NW, NE, SW, SE.
inline constexpr int kNeighborOrder[8][2] = {
    {0, -1}, {0, 1}, {-1, 0}, {1, 0}, {-1, -1}, {1, -1}, {-1, 1}, {1, 1}};

inline bool any_edge_within_1(const EdgeMap& map, int x, int y) {
    for (int ny = y - 1; ny <= y + 1; ++ny) {
        if (ny < 0 || ny >= map.height)
            continue;
        for (int nx = x - 1; nx <= x + 1; ++nx) {
            if (nx < 0 || nx >= map.width)
                continue;
            if (map.at(nx, ny))
                return true;
        }
    }
    return false;
}

} // namespace detail

/// Compares two edge maps and classifies every edge pixel.
///
/// Tolerance off: plain set comparison (TP = edged in both maps).
///
/// v1.0 with tolerance: a distorted edge pixel is TP when some GT edge pixel
/// lies within Chebyshev distance 1, a GT edge pixel is FN when no distorted
/// edge pixel lies within Chebyshev distance 1. Single-pixel edge jitter is
/// thereby forgiven on both sides; tp+fn may exceed the GT edge count because
/// one GT pixel can absorb several distorted neighbors.
///
/// v1.1: greedy one-to-one assignment so widened edges stop inflating TP.
/// Pass 1 matches every distorted edge pixel sitting exactly on a GT edge
/// pixel. Pass 2 visits the remaining distorted edge pixels in raster order;
/// each takes the first unconsumed GT edge pixel among its 8 neighbors in the
/// fixed order N, S, W, E, NW, NE, SW, SE. Unmatched distorted pixels are FP,
/// unconsumed GT pixels are FN, so tp+fn equals the GT edge count exactly.
inline EdgeMatchResult match_edges(const EdgeMap& gt_edges, const EdgeMap& dist_edges,
                                   const ErqaConfig& config = {}) {
    if (!gt_edges.same_shape(dist_edges))
        throw GeometryError("match_edges requires equal edge-map dimensions");
    validate(config);

    const int w = gt_edges.width;
    const int h = gt_edges.height;
    EdgeMatchResult r;
    r.width = w;
    r.height = h;
    r.classification.assign(static_cast<std::size_t>(w) * h, PixelLabel::none);

    auto classify = [&](int x, int y, PixelLabel label) {
        PixelLabel& slot = r.classification[static_cast<std::size_t>(y) * w + x];
        // FP is rendered over FN when both land on one pixel; TP wins always.
        if (slot == PixelLabel::tp)
            return;
        if (slot == PixelLabel::fp && label == PixelLabel::fn)
            return;
        slot = label;
    };

    if (!config.enable_local_tolerance) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const bool g = gt_edges.at(x, y);
                const bool d = dist_edges.at(x, y);
                if (d && g) {
                    ++r.tp;
                    classify(x, y, PixelLabel::tp);
                } else if (d) {
                    ++r.fp;
                    classify(x, y, PixelLabel::fp);
                } else if (g) {
                    ++r.fn;
                    classify(x, y, PixelLabel::fn);
                }
            }
    } else if (config.version == ErqaVersion::v1_0) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                if (dist_edges.at(x, y)) {
                    if (detail::any_edge_within_1(gt_edges, x, y)) {
                        ++r.tp;
                        classify(x, y, PixelLabel::tp);
                    } else {
                        ++r.fp;
                        classify(x, y, PixelLabel::fp);
                    }
                }
            }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                if (gt_edges.at(x, y) && !detail::any_edge_within_1(dist_edges, x, y)) {
                    ++r.fn;
                    classify(x, y, PixelLabel::fn);
                }
            }
    } else {
        std::vector<std::uint8_t> consumed(static_cast<std::size_t>(w) * h, 0);
        std::vector<std::uint8_t> matched(static_cast<std::size_t>(w) * h, 0);
        // Pass 1: exact positions.
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (dist_edges.mask[i] && gt_edges.mask[i]) {
                    consumed[i] = 1;
                    matched[i] = 1;
                    ++r.tp;
                    classify(x, y, PixelLabel::tp);
                }
            }
        // Pass 2: raster order, fixed neighbor order, one GT pixel each.
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (!dist_edges.mask[i] || matched[i])
                    continue;
                bool found = false;
                for (const auto& off : detail::kNeighborOrder) {
                    const int nx = x + off[0];
                    const int ny = y + off[1];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h)
                        continue;
                    const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                    if (gt_edges.mask[j] && !consumed[j]) {
                        consumed[j] = 1;
                        found = true;
                        break;
                    }
                }
                if (found) {
                    matched[i] = 1;
                    ++r.tp;
                    classify(x, y, PixelLabel::tp);
                } else {
                    ++r.fp;
                    classify(x, y, PixelLabel::fp);
                }
            }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (gt_edges.mask[i] && !consumed[i]) {
                    ++r.fn;
                    classify(x, y, PixelLabel::fn);
                }
            }
    }

    const F1Scores s = f1_score(r.tp, r.fp, r.fn);
    r.precision = s.precision;
    r.recall = s.recall;
    r.f1 = s.f1;
    return r;
}

/// Intermediate products of a full metric run, for visualization and reports.
struct ErqaRun {
    EdgeMatchResult result;
    ShiftVector shift;   // (0,0) when the global stage is off
    Frame gt_overlap;    // luma planes actually compared
    Frame dist_overlap;
};

/// Full pipeline: optional global shift compensation (search + overlap crop),
/// edge detection on both planes, edge matching, F1.
inline ErqaRun erqa_run(const Frame& gt, const Frame& dist, const ErqaConfig& config = {}) {
    validate(config);
    if (gt.width != dist.width || gt.height != dist.height)
        throw GeometryError("erqa requires frames of equal dimensions");

    ErqaRun run;
    Frame g = to_luma(gt);
    Frame d = to_luma(dist);
    if (config.enable_global_shift) {
        const ShiftSearchResult search = find_global_shift(g, d, config.shift_radius);
        run.shift = search.shift;
        auto [gs, ds] = overlap_pair(g, d, search.shift);
        g = std::move(gs);
        d = std::move(ds);
    }
    const EdgeMap gt_edges = detect_edges(g, config.canny);
    const EdgeMap dist_edges = detect_edges(d, config.canny);
    run.result = match_edges(gt_edges, dist_edges, config);
    run.gt_overlap = std::move(g);
    run.dist_overlap = std::move(d);
    return run;
}

/// Edge-restoration quality of `dist` against the ground truth `gt`.
inline EdgeMatchResult erqa(const Frame& gt, const Frame& dist,
                            const ErqaConfig& config = {}) {
    return erqa_run(gt, dist, config).result;
}

/// Overlay for inspecting a match: background dimmed to 40% luminance, true
/// positives white, false negatives blue, false positives red.
inline Frame render_classification(const EdgeMatchResult& result, const Frame& background) {
    if (background.width != result.width || background.height != result.height)
        throw GeometryError("render_classification requires matching dimensions");
    const Frame luma = to_luma(background);
    Frame out(result.width, result.height, 3);
    for (int y = 0; y < result.height; ++y)
        for (int x = 0; x < result.width; ++x) {
            const int v = luma.at(x, y);
            const std::uint8_t dimmed = static_cast<std::uint8_t>((4 * v + 5) / 10);
            std::uint8_t rgb[3] = {dimmed, dimmed, dimmed};
            switch (result.label_at(x, y)) {
            case PixelLabel::tp:
                rgb[0] = rgb[1] = rgb[2] = 255;
                break;
            case PixelLabel::fp:
                rgb[0] = 255;
                rgb[1] = rgb[2] = 0;
                break;
            case PixelLabel::fn:
                rgb[0] = rgb[1] = 0;
                rgb[2] = 255;
                break;
            case PixelLabel::none:
                break;
            }
            out.set(x, y, 0, rgb[0]);
            out.set(x, y, 1, rgb[1]);
            out.set(x, y, 2, rgb[2]);
        }
    return out;
}

} // namespace erqa

#endif // ERQA_MATCHING_HPP
