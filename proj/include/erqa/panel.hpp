#ifndef ERQA_PANEL_HPP
#define ERQA_PANEL_HPP

#include <string>
#include <vector>

#include "erqa/image.hpp"
#include "erqa/matching.hpp"
#include "erqa/shift.hpp"
#include "erqa/ssim.hpp"

namespace erqa {

struct PanelRow {
    std::string metric;
    double raw = 0.0;
    double compensated = 0.0;
};

struct MetricPanel {
    std::vector<PanelRow> rows; // psnr, ssim, erqa_v1.0, erqa_v1.1
};

/// Side-by-side comparison of every built-in metric with and without global
/// shift compensation. PSNR and SSIM run on luma planes and get compensated
/// through the generic wrapper; the ERQA rows toggle the built-in global
/// stage instead. A perfect PSNR is +infinity.
inline MetricPanel metric_panel(const Frame& gt, const Frame& dist) {
    if (gt.width != dist.width || gt.height != dist.height)
        throw GeometryError("metric_panel requires frames of equal dimensions");

    const Frame g = to_luma(gt);
    const Frame d = to_luma(dist);

    MetricPanel panel;
    panel.rows.push_back(
        {"psnr", psnr(g, d).db,
         score_with_compensation([](const Frame& a, const Frame& b) { return psnr(a, b); },
                                 g, d)
             .db});
    panel.rows.push_back(
        {"ssim", ssim(g, d),
         score_with_compensation([](const Frame& a, const Frame& b) { return ssim(a, b); },
                                 g, d)});
    for (ErqaVersion version : {ErqaVersion::v1_0, ErqaVersion::v1_1}) {
        ErqaConfig raw_config;
        raw_config.version = version;
        raw_config.enable_global_shift = false;
        ErqaConfig comp_config;
        comp_config.version = version;
        comp_config.enable_global_shift = true;
        panel.rows.push_back({"erqa_v" + to_string(version),
                              erqa(gt, dist, raw_config).f1,
                              erqa(gt, dist, comp_config).f1});
    }
    return panel;
}

} // namespace erqa

#endif // ERQA_PANEL_HPP
