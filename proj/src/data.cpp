#include "adatg/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "adatg/rng.hpp"

namespace adatg {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr char kImageMagic[8] = {'A', 'D', 'T', 'G', 'I', 'M', 'G', '1'};
constexpr uint32_t kImageVersion = 1;

// Zero-phase Ricker wavelet sampled at pixel pitch; peak_freq in cycles per
// image height.
std::vector<double> ricker_wavelet(double peak_freq, int side) {
    const double f = peak_freq / static_cast<double>(side);  // cycles per pixel
    const int half = std::max(2, static_cast<int>(std::ceil(1.5 / f)));
    std::vector<double> w(2 * half + 1);
    for (int i = -half; i <= half; ++i) {
        const double u = kPi * f * i;
        w[i + half] = (1.0 - 2.0 * u * u) * std::exp(-u * u);
    }
    return w;
}

GridImage generate_one(int side, uint64_t image_seed, const SyntheticParams& p, bool* degenerate) {
    Rng rng(image_seed);
    GridImage img(side, side);

    // Piecewise-layered reflectivity: horizon depth varies smoothly across
    // columns (dip + curvature), boundary reflectivity alternates in sign.
    const int layers = rng.uniform_int(p.layer_count_min, p.layer_count_max);
    GridImage reflectivity(side, side);
    for (int l = 0; l < layers; ++l) {
        const double base_depth = rng.uniform(0.05, 0.95) * side;
        const double dip = rng.uniform(-0.15, 0.15);
        const double bend = rng.uniform(-6.0, 6.0);
        const double phase = rng.uniform(0.0, 2.0 * kPi);
        const double strength = rng.uniform(0.5, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        for (int c = 0; c < side; ++c) {
            const double x = static_cast<double>(c) / side;
            const double depth = base_depth + dip * c + bend * std::sin(2.0 * kPi * x + phase);
            const int r = static_cast<int>(std::lround(depth));
            if (r >= 0 && r < side) reflectivity.at(r, c) += strength;
        }
    }

    // Vertical convolution with the band-limited wavelet: the low-frequency
    // envelope of the scene.
    const double freq = rng.uniform(p.wavelet_freq_min, p.wavelet_freq_max);
    const auto wavelet = ricker_wavelet(freq, side);
    const int half = (static_cast<int>(wavelet.size()) - 1) / 2;
    for (int c = 0; c < side; ++c)
        for (int r = 0; r < side; ++r) {
            const double refl = reflectivity.at(r, c);
            if (refl == 0.0) continue;
            for (int k = -half; k <= half; ++k) {
                const int rr = r + k;
                if (rr >= 0 && rr < side) img.at(rr, c) += refl * wavelet[k + half];
            }
        }

    // Sparse sharp arrivals: short bright dashes, the high-frequency content.
    const int reflectors = rng.uniform_int(p.reflector_count_min, p.reflector_count_max);
    for (int i = 0; i < reflectors; ++i) {
        const int r = rng.uniform_int(0, side - 1);
        const int c0 = rng.uniform_int(0, side - 1);
        const int len = rng.uniform_int(1, std::max(2, side / 16));
        const double amp = p.reflector_amplitude * rng.uniform(0.5, 1.0) *
                           (rng.uniform() < 0.5 ? -1.0 : 1.0);
        for (int c = c0; c < std::min(side, c0 + len); ++c) img.at(r, c) += amp;
    }

    if (p.noise_level > 0.0)
        for (double& v : img.pixels) v += rng.normal(0.0, p.noise_level);

    // Zero mean, unit variance; an identically-zero scene is left as-is and
    // flagged.
    double mean = 0.0;
    for (double v : img.pixels) mean += v;
    mean /= static_cast<double>(img.size());
    double var = 0.0;
    for (double v : img.pixels) var += (v - mean) * (v - mean);
    var /= static_cast<double>(img.size());
    if (var < 1e-24) {
        *degenerate = true;
        return img;
    }
    const double inv_std = 1.0 / std::sqrt(var);
    for (double& v : img.pixels) v = (v - mean) * inv_std;
    *degenerate = false;
    return img;
}

void fail_format(const std::string& path, size_t offset, const std::string& what) {
    throw std::runtime_error("read_image: " + path + ": " + what + " at byte offset " +
                             std::to_string(offset));
}

}  // namespace

Dataset generate_synthetic(int count, int side, uint64_t seed, const SyntheticParams& params) {
    if (side < 32) throw std::invalid_argument("generate_synthetic: side must be >= 32");
    if (count < 1) throw std::invalid_argument("generate_synthetic: count must be >= 1");
    if (params.layer_count_min < 0 || params.layer_count_max < params.layer_count_min)
        throw std::invalid_argument("generate_synthetic: invalid layer count range");
    if (params.wavelet_freq_min <= 0.0 || params.wavelet_freq_max < params.wavelet_freq_min)
        throw std::invalid_argument("generate_synthetic: invalid wavelet frequency range");
    if (params.noise_level < 0.0)
        throw std::invalid_argument("generate_synthetic: noise_level must be >= 0");

    Dataset ds;
    ds.seed = seed;
    ds.images.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        bool degenerate = false;
        ds.images.push_back(
            generate_one(side, derive_seed(seed, static_cast<uint64_t>(i)), params, &degenerate));
        if (degenerate) ds.degenerate_images.push_back(static_cast<size_t>(i));
    }
    return ds;
}

GridImage reflect_pad(const GridImage& image, int target_side) {
    if (target_side < std::max(image.height, image.width))
        throw std::invalid_argument("reflect_pad: target side " + std::to_string(target_side) +
                                    " smaller than input " + std::to_string(image.height) + "x" +
                                    std::to_string(image.width));
    const int top = (target_side - image.height) / 2;
    const int left = (target_side - image.width) / 2;

    // Mirror index without edge repetition, folded for pads wider than the
    // source extent.
    auto mirror = [](int x, int n) {
        if (n == 1) return 0;
        const int period = 2 * n - 2;
        int m = x % period;
        if (m < 0) m += period;
        return (m < n) ? m : period - m;
    };

    GridImage out(target_side, target_side);
    for (int r = 0; r < target_side; ++r) {
        const int sr = mirror(r - top, image.height);
        for (int c = 0; c < target_side; ++c)
            out.at(r, c) = image.at(sr, mirror(c - left, image.width));
    }
    return out;
}

bool is_test_index(uint64_t seed, size_t index, double test_fraction) {
    const uint64_t h = splitmix64(seed ^ splitmix64(static_cast<uint64_t>(index) + 0x5eed));
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return u < test_fraction;
}

void write_image(const std::string& path, const GridImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_image: cannot open " + path);
    out.write(kImageMagic, sizeof(kImageMagic));
    const uint32_t version = kImageVersion;
    const uint32_t h = static_cast<uint32_t>(image.height);
    const uint32_t w = static_cast<uint32_t>(image.width);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    out.write(reinterpret_cast<const char*>(&w), 4);
    std::vector<float> buf(image.size());
    for (size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<float>(image.pixels[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out) throw std::runtime_error("write_image: short write to " + path);
}

GridImage read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_image: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (in.gcount() != 8) fail_format(path, 0, "truncated header");
    if (std::memcmp(magic, kImageMagic, 8) != 0) fail_format(path, 0, "bad magic bytes");
    uint32_t version = 0, h = 0, w = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&h), 4);
    in.read(reinterpret_cast<char*>(&w), 4);
    if (!in) fail_format(path, 8, "truncated header");
    if (version != kImageVersion) fail_format(path, 8, "unsupported version " + std::to_string(version));
    if (h < 1 || w < 1 || h > 1u << 20 || w > 1u << 20) fail_format(path, 12, "implausible dimensions");
    GridImage img(static_cast<int>(h), static_cast<int>(w));
    std::vector<float> buf(img.size());
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)))
        fail_format(path, 20 + static_cast<size_t>(std::max<std::streamsize>(in.gcount(), 0)),
                    "truncated pixel data");
    for (size_t i = 0; i < buf.size(); ++i) img.pixels[i] = static_cast<double>(buf[i]);
    return img;
}

void write_pgm(const std::string& path, const GridImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    for (double v : image.pixels) {
        const double clamped = std::clamp(v, 0.0, 1.0);
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(clamped * 255.0))));
    }
    if (!out) throw std::runtime_error("write_pgm: short write to " + path);
}

GridImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P5" || w < 1 || h < 1 || maxval != 255)
        throw std::runtime_error("read_pgm: " + path + ": unsupported PGM header");
    in.get();  // single whitespace after maxval
    GridImage img(h, w);
    for (size_t i = 0; i < img.size(); ++i) {
        const int q = in.get();
        if (q == EOF) throw std::runtime_error("read_pgm: " + path + ": truncated pixel data");
        img.pixels[i] = static_cast<double>(q) / 255.0;
    }
    return img;
}

GridImage normalize_to_unit(const GridImage& image) {
    double lo = image.pixels[0], hi = image.pixels[0];
    for (double v : image.pixels) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    GridImage out(image.height, image.width);
    if (hi - lo < 1e-30) {
        std::fill(out.pixels.begin(), out.pixels.end(), 0.5);
        return out;
    }
    const double inv = 1.0 / (hi - lo);
    for (size_t i = 0; i < image.size(); ++i) out.pixels[i] = (image.pixels[i] - lo) * inv;
    return out;
}

std::vector<std::string> list_image_files(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw std::runtime_error("list_image_files: not a directory: " + dir);
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".img") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

Dataset load_image_dir(const std::string& dir) {
    Dataset ds;
    for (const auto& f : list_image_files(dir)) ds.images.push_back(read_image(f));
    if (ds.images.empty()) throw std::runtime_error("load_image_dir: no .img files in " + dir);
    for (size_t i = 1; i < ds.images.size(); ++i)
        require_same_shape(ds.images[0], ds.images[i], "load_image_dir");
    return ds;
}

}  // namespace adatg
