#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "adatg/grid.hpp"
#include "adatg/hilbert.hpp"

namespace adatg {

enum class OrderTag { Raster, Hilbert, FixedTg, RanTg, TwogridCoarse, TwogridFine };

struct PatchGeometry {
    int image_side = 0;
    int patch_side = 0;  // base (coarse) patch side in pixels
    int grid_side = 0;   // image_side / patch_side
};

// Pixel rectangle covered by one token.
struct PatchRect {
    int row0 = 0;
    int col0 = 0;
    int side = 0;
};

// Ordered sequence of flattened patches plus everything needed to invert it.
// `cells` maps sequence position to the pixel rectangle of that token and is
// authoritative for detokenization; `permutation` maps position to row-major
// patch index for uniform-grid orderings and is empty for the mixed-resolution
// TG variants (there the cells themselves are the bijection onto the
// mixed-resolution cover).
struct TokenSequence {
    PatchGeometry geometry;
    OrderTag order_tag = OrderTag::Raster;
    std::vector<int> permutation;
    std::vector<PatchRect> cells;
    std::vector<std::vector<double>> tokens;  // row-major pixels of each patch

    size_t size() const { return tokens.size(); }
};

TokenSequence tokenize_raster(const GridImage& image, int patch_side);

// Requires grid_side = 2^n; token order follows the order-n Hilbert curve.
TokenSequence tokenize_hilbert(const GridImage& image, int patch_side);

// Coarse order-n1 Hilbert tokens over the low band, fine order-n2 tokens over
// the high band. Both bands cover the full image extent.
std::pair<TokenSequence, TokenSequence> tokenize_twogrid(const BandPair& bands, int coarse_order,
                                                         int fine_order);

// Coarse Hilbert traversal where each masked cell is replaced in place by its
// four order-(coarse_order+1) subcells in fine-curve order. Mask indices are
// row-major coarse-grid cell ids.
TokenSequence tokenize_fixed_tg(const GridImage& image, int coarse_order,
                                const std::set<int>& refine_mask);

// Bernoulli(p) refinement per coarse cell with a seeded generator; delegates
// to tokenize_fixed_tg with the sampled mask.
TokenSequence tokenize_ran_tg(const GridImage& image, int coarse_order, double p, uint64_t seed);

// The Ran-TG mask sampler, exposed for Monte Carlo checks.
std::set<int> sample_refine_mask(int coarse_order, double p, uint64_t seed);

// Default Fixed-TG refinement set: the four central cells of the coarse grid.
std::set<int> central_refine_mask(int coarse_order);

// Paste every token back at its cell; exact inverse of all tokenizers.
GridImage detokenize(const TokenSequence& seq);

}  // namespace adatg
