#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "adatg/grid.hpp"

namespace adatg {

// 2-D discrete Fourier coefficients, row-major, unshifted layout (frequency 0
// at index 0). Forward transform is unnormalized; the inverse carries the
// 1/(H*W) factor, so inverse_dft2(dft2(x)) == x.
struct Spectrum {
    int height = 0;
    int width = 0;
    std::vector<std::complex<double>> coefficients;

    std::complex<double>& at(int u, int v) { return coefficients[static_cast<size_t>(u) * width + v]; }
    std::complex<double> at(int u, int v) const { return coefficients[static_cast<size_t>(u) * width + v]; }
};

// Low-band support geometry on signed centered frequencies (u, v):
// Square keeps max(|u|,|v|) <= k0, Radial keeps sqrt(u^2+v^2) <= k0.
enum class BandGeometry { Square, Radial };

// Separable 2-D DFT with omega = exp(-2*pi*i/N) per axis. Radix-2 FFT on
// power-of-two extents, direct summation otherwise. Throws on non-finite input.
Spectrum dft2(const GridImage& image);

// Inverse transform; result scaled by 1/(H*W). Returns complex values so the
// caller can inspect the imaginary residue.
std::vector<std::complex<double>> inverse_dft2(const Spectrum& spectrum);

// Real-valued inverse for spectra of real images (or symmetric masks thereof).
// Throws a numeric error if the imaginary residue exceeds tolerance.
GridImage inverse_dft2_real(const Spectrum& spectrum, double imag_tolerance = 1e-9);

// Largest threshold accepted by split_bands: floor(min(H, W) / 2).
int max_frequency(const GridImage& image);

// Splits into (low, high) physical-domain bands at threshold k0. low + high
// reconstructs the input exactly up to transform round-off.
BandPair split_bands(const GridImage& image, int k0, BandGeometry geometry = BandGeometry::Square);

// l2 norms of the two band images, (low_norm, high_norm).
std::pair<double, double> band_energy(const BandPair& pair);

// Signed centered frequency for index j of an axis of extent n: j for
// j <= n/2, else j - n.
inline int signed_frequency(int j, int n) { return (j <= n / 2) ? j : j - n; }

}  // namespace adatg
