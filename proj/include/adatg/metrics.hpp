#pragma once

#include <vector>

#include "adatg/grid.hpp"

namespace adatg {

// Parameters for the structural-similarity family. Defaults are the canonical
// ones: 11-tap Gaussian window with sigma 1.5, k1 = 0.01, k2 = 0.03, five
// scales with the standard weight vector.
struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
};

struct MetricReport {
    double mse = 0.0;
    double psnr = 0.0;     // dB, capped at kPsnrCap when mse < 1e-12
    double ssim = 0.0;     // in [-1, 1]
    double ms_ssim = 0.0;  // in [0, 1]
};

constexpr double kPsnrCap = 99.0;

double mse(const GridImage& a, const GridImage& b);

double psnr(const GridImage& a, const GridImage& b, double peak);

// Mean SSIM over all fully-interior Gaussian-weighted windows (stride 1).
double ssim(const GridImage& a, const GridImage& b, const SsimParams& params, double peak);

// Multi-scale SSIM: contrast/structure terms at every scale, luminance folded
// in at the coarsest, 2x average-pooling between scales (trailing odd row/col
// dropped). Per-scale means are clamped at zero before the fractional powers.
// Weights must sum to 1 within 1e-3 and are renormalized exactly.
double ms_ssim(const GridImage& a, const GridImage& b, int scales,
               const std::vector<double>& weights, const SsimParams& params, double peak);

// Standard 5-scale weights (renormalized to sum exactly 1).
std::vector<double> default_ms_ssim_weights(int scales = 5);

// peak = data range across both images (max over both minus min over both),
// floored at 1e-12.
double infer_peak(const GridImage& a, const GridImage& b);

// Convenience bundle; scales is capped to what the image side allows.
MetricReport compute_report(const GridImage& a, const GridImage& b, double peak,
                            const SsimParams& params = SsimParams{});

}  // namespace adatg
