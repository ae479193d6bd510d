#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "adatg/data.hpp"
#include "adatg/rng.hpp"
#include "adatg/spectral.hpp"

using namespace adatg;

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Direct O(N^4) double-sum DFT, the matrix-form reference.
std::vector<std::complex<double>> oracle_dft2(const GridImage& img) {
    const int h = img.height, w = img.width;
    std::vector<std::complex<double>> out(static_cast<size_t>(h) * w);
    for (int u = 0; u < h; ++u)
        for (int v = 0; v < w; ++v) {
            std::complex<double> acc(0.0, 0.0);
            for (int r = 0; r < h; ++r)
                for (int c = 0; c < w; ++c) {
                    const double ang = -kTwoPi * (static_cast<double>(u) * r / h +
                                                  static_cast<double>(v) * c / w);
                    acc += img.at(r, c) * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            out[static_cast<size_t>(u) * w + v] = acc;
        }
    return out;
}

GridImage random_image(int h, int w, uint64_t seed) {
    GridImage img(h, w);
    Rng rng(seed);
    for (double& v : img.pixels) v = rng.normal();
    return img;
}

}  // namespace

TEST_CASE("constant image transforms to a DC-only spectrum") {
    GridImage img(4, 4, 2.5);
    const Spectrum s = dft2(img);
    CHECK(s.at(0, 0).real() == doctest::Approx(2.5 * 16).epsilon(1e-12));
    for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v)
            if (u || v) CHECK(std::abs(s.at(u, v)) < 1e-9);
}

TEST_CASE("pure column cosine occupies only frequencies +-3") {
    GridImage img(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) img.at(r, c) = std::cos(kTwoPi * 3.0 * c / 8.0);
    const Spectrum s = dft2(img);
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            const bool expected = (u == 0) && (v == 3 || v == 5);  // 5 = -3 mod 8
            if (expected)
                CHECK(std::abs(s.at(u, v)) > 1.0);
            else
                CHECK(std::abs(s.at(u, v)) < 1e-9);
        }
}

TEST_CASE("fft path matches the O(N^4) oracle on random 8x8 images") {
    for (uint64_t seed = 0; seed < 4; ++seed) {
        const GridImage img = random_image(8, 8, seed);
        const Spectrum s = dft2(img);
        const auto oracle = oracle_dft2(img);
        for (size_t i = 0; i < oracle.size(); ++i)
            CHECK(std::abs(s.coefficients[i] - oracle[i]) < 1e-9);
    }
}

TEST_CASE("non-power-of-two extents also match the oracle") {
    const GridImage img = random_image(6, 10, 11);
    const Spectrum s = dft2(img);
    const auto oracle = oracle_dft2(img);
    for (size_t i = 0; i < oracle.size(); ++i)
        CHECK(std::abs(s.coefficients[i] - oracle[i]) < 1e-9);
}

TEST_CASE("inverse transform reproduces the image") {
    const GridImage img = random_image(16, 16, 3);
    const GridImage back = inverse_dft2_real(dft2(img));
    for (size_t i = 0; i < img.size(); ++i)
        CHECK(back.pixels[i] == doctest::Approx(img.pixels[i]).epsilon(1e-9));
}

TEST_CASE("Parseval: spectrum energy scaled by 1/(HW) equals image energy") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const GridImage img = random_image(16, 16, 100 + seed);
        const Spectrum s = dft2(img);
        double spec_energy = 0.0;
        for (const auto& c : s.coefficients) spec_energy += std::norm(c);
        spec_energy /= static_cast<double>(img.size());
        double img_energy = 0.0;
        for (double v : img.pixels) img_energy += v * v;
        CHECK(spec_energy == doctest::Approx(img_energy).epsilon(1e-6));
    }
}

TEST_CASE("k0 at the maximum frequency yields an empty high band") {
    const GridImage img = random_image(16, 16, 4);
    const BandPair bands = split_bands(img, max_frequency(img));
    CHECK(l2_norm(bands.high) < 1e-9);
}

TEST_CASE("k0 = 0 on a zero-mean image yields an empty low band") {
    GridImage img = random_image(16, 16, 5);
    double mean = 0.0;
    for (double v : img.pixels) mean += v;
    mean /= static_cast<double>(img.size());
    for (double& v : img.pixels) v -= mean;
    const BandPair bands = split_bands(img, 0);
    CHECK(l2_norm(bands.low) < 1e-9);
}

TEST_CASE("single-frequency sine lands in the expected band") {
    GridImage img(64, 64);
    for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c) img.at(r, c) = std::sin(kTwoPi * 5.0 * c / 64.0);
    const auto [lo4, hi4] = band_energy(split_bands(img, 4));
    CHECK(lo4 < 1e-9);
    CHECK(hi4 == doctest::Approx(l2_norm(img)).epsilon(1e-9));
    const auto [lo8, hi8] = band_energy(split_bands(img, 8));
    CHECK(hi8 < 1e-9);
    CHECK(lo8 == doctest::Approx(l2_norm(img)).epsilon(1e-9));
}

TEST_CASE("band sum reconstructs the input for every k0") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const GridImage img = random_image(32, 32, 200 + seed);
        const double norm = l2_norm(img);
        for (int k0 : {0, 3, 8, 16}) {
            const BandPair bands = split_bands(img, k0);
            double err = 0.0;
            for (size_t i = 0; i < img.size(); ++i) {
                const double d = bands.low.pixels[i] + bands.high.pixels[i] - img.pixels[i];
                err += d * d;
            }
            CHECK(std::sqrt(err) / norm < 1e-6);
        }
    }
}

TEST_CASE("band supports are disjoint so the energy identity holds") {
    const GridImage img = random_image(24, 24, 6);
    const BandPair bands = split_bands(img, 5);
    double dot = 0.0;
    for (size_t i = 0; i < img.size(); ++i) dot += bands.low.pixels[i] * bands.high.pixels[i];
    const auto [lo, hi] = band_energy(bands);
    double orig_sq = 0.0;
    for (double v : img.pixels) orig_sq += v * v;
    CHECK(lo * lo + hi * hi + 2.0 * dot == doctest::Approx(orig_sq).epsilon(1e-9));
    // The masks are orthogonal projections, so the cross term itself vanishes.
    CHECK(std::abs(dot) / orig_sq < 1e-9);
}

TEST_CASE("band energies move monotonically with k0 on synthetic seismograms") {
    const Dataset ds = generate_synthetic(3, 256, 77);
    for (const auto& img : ds.images) {
        double prev_lo = -1.0, prev_hi = 1e18;
        for (int k0 : {4, 8, 16, 32, 64}) {
            const auto [lo, hi] = band_energy(split_bands(img, k0));
            CHECK(lo > prev_lo);
            CHECK(hi < prev_hi);
            prev_lo = lo;
            prev_hi = hi;
        }
    }
}

TEST_CASE("radial geometry differs from square off-axis but also reconstructs") {
    const GridImage img = random_image(32, 32, 8);
    const BandPair sq = split_bands(img, 8, BandGeometry::Square);
    const BandPair rad = split_bands(img, 8, BandGeometry::Radial);
    // radial keeps a subset of the square's support
    CHECK(l2_norm(rad.low) <= l2_norm(sq.low) + 1e-12);
    double err = 0.0;
    for (size_t i = 0; i < img.size(); ++i) {
        const double d = rad.low.pixels[i] + rad.high.pixels[i] - img.pixels[i];
        err += d * d;
    }
    CHECK(std::sqrt(err) / l2_norm(img) < 1e-6);
}

TEST_CASE("high band of zeros has zero norm") {
    GridImage img(8, 8, 1.0);
    const BandPair bands = split_bands(img, 2);  // constant image is pure DC
    const auto [lo, hi] = band_energy(bands);
    CHECK(hi == doctest::Approx(0.0));
    CHECK(lo == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("errors: k0 bounds and non-finite input") {
    const GridImage img = random_image(16, 16, 9);
    CHECK_THROWS_AS(split_bands(img, 9), std::out_of_range);
    CHECK_THROWS_AS(split_bands(img, -1), std::out_of_range);
    CHECK_THROWS_WITH(split_bands(img, 9), doctest::Contains("[0, 8]"));
    GridImage bad(4, 4, 1.0);
    bad.pixels[3] = std::nan("");
    CHECK_THROWS_AS(dft2(bad), std::runtime_error);
}
