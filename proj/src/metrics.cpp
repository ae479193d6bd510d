#include "adatg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adatg {

namespace {

std::vector<double> gaussian_kernel_1d(int window, double sigma) {
    std::vector<double> k(window);
    const double c = (window - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < window; ++i) {
        k[i] = std::exp(-((i - c) * (i - c)) / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Horizontal then vertical pass with the separable kernel; output covers only
// positions where the window fits entirely inside the image.
GridImage gaussian_filter_valid(const GridImage& img, const std::vector<double>& kernel) {
    const int w = static_cast<int>(kernel.size());
    const int oh = img.height - w + 1;
    const int ow = img.width - w + 1;
    GridImage tmp(img.height, ow);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int i = 0; i < w; ++i) acc += kernel[i] * img.at(r, c + i);
            tmp.at(r, c) = acc;
        }
    GridImage out(oh, ow);
    for (int r = 0; r < oh; ++r)
        for (int c = 0; c < ow; ++c) {
            double acc = 0.0;
            for (int i = 0; i < w; ++i) acc += kernel[i] * tmp.at(r + i, c);
            out.at(r, c) = acc;
        }
    return out;
}

GridImage elementwise_product(const GridImage& a, const GridImage& b) {
    GridImage out(a.height, a.width);
    for (size_t i = 0; i < out.size(); ++i) out.pixels[i] = a.pixels[i] * b.pixels[i];
    return out;
}

struct SsimMaps {
    GridImage full;  // luminance * contrast-structure
    GridImage cs;    // contrast-structure only
};

// Separable-filter SSIM maps. The naive per-window reference used by the
// tests must agree with this to 1e-9.
SsimMaps ssim_maps(const GridImage& a, const GridImage& b, const SsimParams& p, double peak) {
    require_same_shape(a, b, "ssim");
    if (a.height < p.window || a.width < p.window)
        throw std::invalid_argument("ssim: image " + std::to_string(a.height) + "x" +
                                    std::to_string(a.width) + " smaller than window " +
                                    std::to_string(p.window));
    const auto kernel = gaussian_kernel_1d(p.window, p.sigma);
    const GridImage mu_a = gaussian_filter_valid(a, kernel);
    const GridImage mu_b = gaussian_filter_valid(b, kernel);
    const GridImage raw_aa = gaussian_filter_valid(elementwise_product(a, a), kernel);
    const GridImage raw_bb = gaussian_filter_valid(elementwise_product(b, b), kernel);
    const GridImage raw_ab = gaussian_filter_valid(elementwise_product(a, b), kernel);

    const double c1 = (p.k1 * peak) * (p.k1 * peak);
    const double c2 = (p.k2 * peak) * (p.k2 * peak);

    SsimMaps maps{GridImage(mu_a.height, mu_a.width), GridImage(mu_a.height, mu_a.width)};
    for (size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a.pixels[i];
        const double mb = mu_b.pixels[i];
        const double va = raw_aa.pixels[i] - ma * ma;
        const double vb = raw_bb.pixels[i] - mb * mb;
        const double cov = raw_ab.pixels[i] - ma * mb;
        const double lum = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
        const double cs = (2.0 * cov + c2) / (va + vb + c2);
        maps.full.pixels[i] = lum * cs;
        maps.cs.pixels[i] = cs;
    }
    return maps;
}

double mean(const GridImage& img) {
    return std::accumulate(img.pixels.begin(), img.pixels.end(), 0.0) /
           static_cast<double>(img.size());
}

// 2x2 average pooling; a trailing odd row/column is dropped.
GridImage downsample2(const GridImage& img) {
    const int oh = img.height / 2;
    const int ow = img.width / 2;
    GridImage out(oh, ow);
    for (int r = 0; r < oh; ++r)
        for (int c = 0; c < ow; ++c)
            out.at(r, c) = 0.25 * (img.at(2 * r, 2 * c) + img.at(2 * r, 2 * c + 1) +
                                   img.at(2 * r + 1, 2 * c) + img.at(2 * r + 1, 2 * c + 1));
    return out;
}

}  // namespace

double mse(const GridImage& a, const GridImage& b) {
    require_same_shape(a, b, "mse");
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a.pixels[i] - b.pixels[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr(const GridImage& a, const GridImage& b, double peak) {
    if (peak <= 0.0) throw std::invalid_argument("psnr: peak must be positive");
    const double m = mse(a, b);
    if (m < 1e-12) return kPsnrCap;
    return 10.0 * std::log10(peak * peak / m);
}

double ssim(const GridImage& a, const GridImage& b, const SsimParams& params, double peak) {
    return mean(ssim_maps(a, b, params, peak).full);
}

std::vector<double> default_ms_ssim_weights(int scales) {
    static const std::vector<double> canonical = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    if (scales < 1 || scales > static_cast<int>(canonical.size()))
        throw std::invalid_argument("default_ms_ssim_weights: scales must be in [1, 5]");
    std::vector<double> w(canonical.begin(), canonical.begin() + scales);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= sum;
    return w;
}

double ms_ssim(const GridImage& a, const GridImage& b, int scales,
               const std::vector<double>& weights, const SsimParams& params, double peak) {
    require_same_shape(a, b, "ms_ssim");
    if (scales < 1) throw std::invalid_argument("ms_ssim: scales must be >= 1");
    if (static_cast<int>(weights.size()) != scales)
        throw std::invalid_argument("ms_ssim: expected " + std::to_string(scales) + " weights");
    const int min_side = params.window << (scales - 1);
    if (a.height < min_side || a.width < min_side)
        throw std::invalid_argument("ms_ssim: image side must be >= window * 2^(scales-1) = " +
                                    std::to_string(min_side));
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(wsum - 1.0) > 1e-3)
        throw std::invalid_argument("ms_ssim: weights must sum to 1");

    GridImage ca = a;
    GridImage cb = b;
    double result = 1.0;
    for (int s = 0; s < scales; ++s) {
        const double w = weights[s] / wsum;
        const SsimMaps maps = ssim_maps(ca, cb, params, peak);
        // Clamp before the fractional power; negative means would otherwise
        // produce NaN.
        if (s == scales - 1) {
            result *= std::pow(std::max(mean(maps.full), 0.0), w);
        } else {
            result *= std::pow(std::max(mean(maps.cs), 0.0), w);
            ca = downsample2(ca);
            cb = downsample2(cb);
        }
    }
    return result;
}

double infer_peak(const GridImage& a, const GridImage& b) {
    double lo = a.pixels[0], hi = a.pixels[0];
    for (double v : a.pixels) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : b.pixels) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return std::max(hi - lo, 1e-12);
}

MetricReport compute_report(const GridImage& a, const GridImage& b, double peak,
                            const SsimParams& params) {
    MetricReport r;
    r.mse = mse(a, b);
    r.psnr = psnr(a, b, peak);
    r.ssim = ssim(a, b, params, peak);
    int scales = 5;
    const int side = std::min(a.height, a.width);
    while (scales > 1 && params.window * (1 << (scales - 1)) > side) --scales;
    r.ms_ssim = ms_ssim(a, b, scales, default_ms_ssim_weights(scales), params, peak);
    return r;
}

}  // namespace adatg
