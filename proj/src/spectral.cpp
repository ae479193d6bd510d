#include "adatg/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace adatg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey. sign = -1 forward, +1 inverse.
void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Direct O(n^2) transform for non-power-of-two extents.
void dft_direct(std::vector<std::complex<double>>& a, int sign) {
    const size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    for (size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (size_t j = 0; j < n; ++j) {
            const double ang = sign * kTwoPi * static_cast<double>(k * j % n) / static_cast<double>(n);
            acc += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    a = std::move(out);
}

void transform_1d(std::vector<std::complex<double>>& a, int sign) {
    if (a.size() <= 1) return;
    if (is_pow2(static_cast<int>(a.size())))
        fft_pow2(a, sign);
    else
        dft_direct(a, sign);
}

// Unnormalized separable transform along rows then columns.
void transform_2d(std::vector<std::complex<double>>& data, int h, int w, int sign) {
    std::vector<std::complex<double>> line;
    line.reserve(static_cast<size_t>(std::max(h, w)));
    for (int r = 0; r < h; ++r) {
        line.assign(data.begin() + static_cast<size_t>(r) * w,
                    data.begin() + static_cast<size_t>(r + 1) * w);
        transform_1d(line, sign);
        std::copy(line.begin(), line.end(), data.begin() + static_cast<size_t>(r) * w);
    }
    for (int c = 0; c < w; ++c) {
        line.resize(static_cast<size_t>(h));
        for (int r = 0; r < h; ++r) line[r] = data[static_cast<size_t>(r) * w + c];
        transform_1d(line, sign);
        for (int r = 0; r < h; ++r) data[static_cast<size_t>(r) * w + c] = line[r];
    }
}

double max_abs(const GridImage& image) {
    double m = 0.0;
    for (double v : image.pixels) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

Spectrum dft2(const GridImage& image) {
    if (!image.all_finite())
        throw std::runtime_error("dft2: input contains non-finite pixels");
    Spectrum s;
    s.height = image.height;
    s.width = image.width;
    s.coefficients.assign(image.pixels.begin(), image.pixels.end());
    transform_2d(s.coefficients, s.height, s.width, -1);
    return s;
}

std::vector<std::complex<double>> inverse_dft2(const Spectrum& spectrum) {
    std::vector<std::complex<double>> data = spectrum.coefficients;
    transform_2d(data, spectrum.height, spectrum.width, +1);
    const double scale = 1.0 / (static_cast<double>(spectrum.height) * spectrum.width);
    for (auto& v : data) v *= scale;
    return data;
}

GridImage inverse_dft2_real(const Spectrum& spectrum, double imag_tolerance) {
    const auto data = inverse_dft2(spectrum);
    GridImage img(spectrum.height, spectrum.width);
    double worst = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
        img.pixels[i] = data[i].real();
        worst = std::max(worst, std::abs(data[i].imag()));
    }
    if (worst > imag_tolerance)
        throw std::runtime_error("inverse_dft2_real: imaginary residue " + std::to_string(worst) +
                                 " exceeds tolerance; spectrum is not conjugate-symmetric");
    return img;
}

int max_frequency(const GridImage& image) { return std::min(image.height, image.width) / 2; }

BandPair split_bands(const GridImage& image, int k0, BandGeometry geometry) {
    const int kmax = max_frequency(image);
    if (k0 < 0 || k0 > kmax)
        throw std::out_of_range("split_bands: k0 must be in [0, " + std::to_string(kmax) +
                                "] for a " + std::to_string(image.height) + "x" +
                                std::to_string(image.width) + " image, got " + std::to_string(k0));

    const Spectrum full = dft2(image);
    Spectrum low = full;
    Spectrum high = full;
    for (int u = 0; u < full.height; ++u) {
        const int su = signed_frequency(u, full.height);
        for (int v = 0; v < full.width; ++v) {
            const int sv = signed_frequency(v, full.width);
            bool in_low;
            if (geometry == BandGeometry::Square) {
                in_low = std::max(std::abs(su), std::abs(sv)) <= k0;
            } else {
                in_low = static_cast<double>(su) * su + static_cast<double>(sv) * sv <=
                         static_cast<double>(k0) * k0;
            }
            if (in_low)
                high.at(u, v) = 0.0;
            else
                low.at(u, v) = 0.0;
        }
    }

    // The masks are symmetric under frequency negation, so both inverses stay
    // real; tolerance scaled to the input amplitude.
    const double tol = 1e-9 * std::max(1.0, max_abs(image));
    BandPair pair;
    pair.low = inverse_dft2_real(low, tol);
    pair.high = inverse_dft2_real(high, tol);
    pair.threshold_k0 = k0;
    return pair;
}

std::pair<double, double> band_energy(const BandPair& pair) {
    return {l2_norm(pair.low), l2_norm(pair.high)};
}

}  // namespace adatg
