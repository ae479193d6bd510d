#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace adatg {

// Single-channel 2-D image, row-major, dimensionless amplitude.
struct GridImage {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;  // height * width, row-major

    GridImage() = default;
    GridImage(int h, int w, double fill = 0.0)
        : height(h), width(w), pixels(static_cast<size_t>(h) * static_cast<size_t>(w), fill) {
        if (h < 1 || w < 1)
            throw std::invalid_argument("GridImage: height and width must be >= 1");
    }

    double& at(int r, int c) { return pixels[static_cast<size_t>(r) * width + c]; }
    double at(int r, int c) const { return pixels[static_cast<size_t>(r) * width + c]; }
    size_t size() const { return pixels.size(); }

    bool is_square() const { return height == width; }

    bool all_finite() const {
        for (double v : pixels)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

// (low, high) physical-domain bands produced by spectral decomposition.
struct BandPair {
    GridImage low;
    GridImage high;
    int threshold_k0 = 0;
};

inline double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double l2_norm(const GridImage& img) { return l2_norm(img.pixels); }

inline void require_same_shape(const GridImage& a, const GridImage& b, const std::string& where) {
    if (a.height != b.height || a.width != b.width)
        throw std::invalid_argument(where + ": shape mismatch (" + std::to_string(a.height) + "x" +
                                    std::to_string(a.width) + " vs " + std::to_string(b.height) +
                                    "x" + std::to_string(b.width) + ")");
}

}  // namespace adatg
