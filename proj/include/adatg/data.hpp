#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adatg/grid.hpp"

namespace adatg {

enum class SplitTag { Train, Test };

struct Dataset {
    std::vector<GridImage> images;
    SplitTag split_tag = SplitTag::Train;
    uint64_t seed = 0;
    // Indices of images that came out identically zero and skipped the
    // zero-mean/unit-variance normalization.
    std::vector<size_t> degenerate_images;
};

struct SyntheticParams {
    int layer_count_min = 6;
    int layer_count_max = 14;
    double wavelet_freq_min = 4.0;   // Ricker peak frequency, cycles per image height
    double wavelet_freq_max = 10.0;
    double noise_level = 0.35;       // Gaussian sigma relative to unit layer amplitude
    int reflector_count_min = 10;    // sparse sharp arrivals
    int reflector_count_max = 24;
    double reflector_amplitude = 2.2;
};

// Layered-reflectivity seismogram substitute: gently dipping horizons
// convolved vertically with a zero-phase Ricker wavelet, plus sparse sharp
// reflector arrivals and white noise, normalized to zero mean / unit
// variance per image. Deterministic in (seed, index).
Dataset generate_synthetic(int count, int side, uint64_t seed,
                           const SyntheticParams& params = SyntheticParams{});

// Mirror padding without edge repetition, centered: row [a,b,c] padded by one
// on each side becomes [b,a,b,c,b]. target_side >= side required.
GridImage reflect_pad(const GridImage& image, int target_side);

// Stable train/test assignment: a pure hash of (seed, index), unaffected by
// dataset growth.
bool is_test_index(uint64_t seed, size_t index, double test_fraction);

// Float-tensor image file: 8-byte magic "ADTGIMG1", then u32 version,
// u32 height, u32 width, then height*width little-endian float32, row-major.
void write_image(const std::string& path, const GridImage& image);
GridImage read_image(const std::string& path);

// 8-bit binary PGM for visualization. Writing clamps to [0,1] and quantizes
// with round(v * 255); reading maps back to v = q / 255.
void write_pgm(const std::string& path, const GridImage& image);
GridImage read_pgm(const std::string& path);

// Normalizes to [0, 1] by data range (constant images map to 0.5).
GridImage normalize_to_unit(const GridImage& image);

// Directory helpers for CLI dataset exchange: img_00000.img, ...
std::vector<std::string> list_image_files(const std::string& dir);
Dataset load_image_dir(const std::string& dir);

}  // namespace adatg
