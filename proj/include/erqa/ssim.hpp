#ifndef ERQA_SSIM_HPP
#define ERQA_SSIM_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "erqa/error.hpp"
#include "erqa/image.hpp"

namespace erqa {

/// Canonical SSIM constants: 11x11 Gaussian window (sigma 1.5), k1 = 0.01,
/// k2 = 0.03, 8-bit dynamic range.
struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
};

namespace detail {

inline std::vector<double> gaussian_taps(int window, double sigma) {
    std::vector<double> taps(static_cast<std::size_t>(window));
    const double c = (window - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < window; ++i) {
        taps[static_cast<std::size_t>(i)] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
        sum += taps[static_cast<std::size_t>(i)];
    }
    for (double& t : taps)
        t /= sum; // weights sum to 1, so the 2D product window does too
    return taps;
}

// Valid-mode separable correlation: output is (w-window+1) x (h-window+1).
inline std::vector<double> window_means(const std::vector<double>& plane, int w, int h,
                                        const std::vector<double>& taps) {
    const int k = static_cast<int>(taps.size());
    const int ow = w - k + 1;
    const int oh = h - k + 1;
    std::vector<double> rows(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i)
                acc += taps[static_cast<std::size_t>(i)] *
                       plane[static_cast<std::size_t>(y) * w + x + i];
            rows[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i)
                acc += taps[static_cast<std::size_t>(i)] *
                       rows[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    return out;
}

} // namespace detail

/// Structural similarity of two single-channel frames: mean over all fully
/// contained window positions of the standard luminance-contrast-structure
/// product with stabilizers C1 = (k1*L)^2 and C2 = (k2*L)^2.
inline double ssim(const Frame& a, const Frame& b, const SsimParams& params = {}) {
    if (!a.same_shape(b))
        throw GeometryError("ssim requires equal dimensions and channels");
    if (a.channels != 1)
        throw ContractError("ssim operates on single-channel frames; call to_luma first");
    if (a.width < params.window || a.height < params.window)
        throw GeometryError("ssim requires frames of at least " +
                            std::to_string(params.window) + "x" +
                            std::to_string(params.window) + ", got " +
                            std::to_string(a.width) + "x" + std::to_string(a.height));

    const int w = a.width;
    const int h = a.height;
    const std::size_t n = a.data.size();
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xv = a.data[i];
        const double yv = b.data[i];
        x[i] = xv;
        y[i] = yv;
        xx[i] = xv * xv;
        yy[i] = yv * yv;
        xy[i] = xv * yv;
    }

    const std::vector<double> taps = detail::gaussian_taps(params.window, params.sigma);
    const std::vector<double> mu_x = detail::window_means(x, w, h, taps);
    const std::vector<double> mu_y = detail::window_means(y, w, h, taps);
    const std::vector<double> m_xx = detail::window_means(xx, w, h, taps);
    const std::vector<double> m_yy = detail::window_means(yy, w, h, taps);
    const std::vector<double> m_xy = detail::window_means(xy, w, h, taps);

    const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
    const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);

    double sum = 0.0;
    const std::size_t m = mu_x.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double sxx = m_xx[i] - mu_x[i] * mu_x[i];
        const double syy = m_yy[i] - mu_y[i] * mu_y[i];
        const double sxy = m_xy[i] - mu_x[i] * mu_y[i];
        const double num = (2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * sxy + c2);
        const double den = (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (sxx + syy + c2);
        sum += num / den;
    }
    return sum / static_cast<double>(m);
}

} // namespace erqa

#endif // ERQA_SSIM_HPP
