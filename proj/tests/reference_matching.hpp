#ifndef ERQA_TESTS_REFERENCE_MATCHING_HPP
#define ERQA_TESTS_REFERENCE_MATCHING_HPP

// Brute-force tolerant matching oracle: every distorted edge pixel is checked
// against every GT edge pixel (full enumeration, no neighborhood indexing).

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "erqa/canny.hpp"

namespace testref {

struct Counts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
};

struct Point {
    int x;
    int y;
};

inline std::vector<Point> edge_points(const erqa::EdgeMap& map) {
    std::vector<Point> pts;
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x)
            if (map.at(x, y))
                pts.push_back({x, y});
    return pts;
}

inline bool chebyshev_within_1(Point a, Point b) {
    return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1;
}

inline Counts reference_match_v1_0(const erqa::EdgeMap& gt, const erqa::EdgeMap& dist) {
    const std::vector<Point> gt_pts = edge_points(gt);
    const std::vector<Point> dist_pts = edge_points(dist);
    Counts c;
    for (const Point& d : dist_pts) {
        bool near = false;
        for (const Point& g : gt_pts)
            if (chebyshev_within_1(d, g)) {
                near = true;
                break;
            }
        near ? ++c.tp : ++c.fp;
    }
    for (const Point& g : gt_pts) {
        bool near = false;
        for (const Point& d : dist_pts)
            if (chebyshev_within_1(g, d)) {
                near = true;
                break;
            }
        if (!near)
            ++c.fn;
    }
    return c;
}

} // namespace testref

#endif // ERQA_TESTS_REFERENCE_MATCHING_HPP
