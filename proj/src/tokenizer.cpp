#include "adatg/tokenizer.hpp"

#include <cmath>

#include "adatg/rng.hpp"

namespace adatg {

namespace {

PatchGeometry make_geometry(const GridImage& image, int patch_side, const char* where) {
    if (!image.is_square())
        throw std::invalid_argument(std::string(where) + ": image must be square, got " +
                                    std::to_string(image.height) + "x" + std::to_string(image.width));
    if (patch_side < 1 || image.width % patch_side != 0)
        throw std::invalid_argument(std::string(where) + ": image side " +
                                    std::to_string(image.width) + " not divisible by patch side " +
                                    std::to_string(patch_side));
    return PatchGeometry{image.width, patch_side, image.width / patch_side};
}

int grid_order_of(int grid_side, const char* where) {
    int order = 0;
    int s = grid_side;
    while (s > 1 && s % 2 == 0) {
        s /= 2;
        ++order;
    }
    if (s != 1 || order < 1)
        throw std::invalid_argument(std::string(where) + ": grid_side " +
                                    std::to_string(grid_side) + " is not a power of two >= 2");
    return order;
}

std::vector<double> extract_patch(const GridImage& image, const PatchRect& cell) {
    std::vector<double> patch(static_cast<size_t>(cell.side) * cell.side);
    for (int r = 0; r < cell.side; ++r)
        for (int c = 0; c < cell.side; ++c)
            patch[static_cast<size_t>(r) * cell.side + c] = image.at(cell.row0 + r, cell.col0 + c);
    return patch;
}

}  // namespace

TokenSequence tokenize_raster(const GridImage& image, int patch_side) {
    TokenSequence seq;
    seq.geometry = make_geometry(image, patch_side, "tokenize_raster");
    seq.order_tag = OrderTag::Raster;
    const int g = seq.geometry.grid_side;
    seq.permutation.reserve(static_cast<size_t>(g) * g);
    for (int pr = 0; pr < g; ++pr)
        for (int pc = 0; pc < g; ++pc) {
            seq.permutation.push_back(pr * g + pc);
            PatchRect cell{pr * patch_side, pc * patch_side, patch_side};
            seq.cells.push_back(cell);
            seq.tokens.push_back(extract_patch(image, cell));
        }
    return seq;
}

TokenSequence tokenize_hilbert(const GridImage& image, int patch_side) {
    TokenSequence seq;
    seq.geometry = make_geometry(image, patch_side, "tokenize_hilbert");
    seq.order_tag = OrderTag::Hilbert;
    const int g = seq.geometry.grid_side;
    const int order = grid_order_of(g, "tokenize_hilbert");
    const HilbertMap map = build_hilbert(order);
    for (const auto& [pr, pc] : map.index_to_coord) {
        seq.permutation.push_back(pr * g + pc);
        PatchRect cell{pr * patch_side, pc * patch_side, patch_side};
        seq.cells.push_back(cell);
        seq.tokens.push_back(extract_patch(image, cell));
    }
    return seq;
}

std::pair<TokenSequence, TokenSequence> tokenize_twogrid(const BandPair& bands, int coarse_order,
                                                         int fine_order) {
    if (coarse_order >= fine_order)
        throw std::invalid_argument("tokenize_twogrid: coarse order " +
                                    std::to_string(coarse_order) + " must be < fine order " +
                                    std::to_string(fine_order));
    require_same_shape(bands.low, bands.high, "tokenize_twogrid");
    const int side = bands.low.width;
    const int coarse_cells = 1 << coarse_order;
    const int fine_cells = 1 << fine_order;
    if (side % coarse_cells != 0 || side % fine_cells != 0)
        throw std::invalid_argument("tokenize_twogrid: image side " + std::to_string(side) +
                                    " not divisible by 2^" + std::to_string(coarse_order) +
                                    " and 2^" + std::to_string(fine_order));

    TokenSequence low = tokenize_hilbert(bands.low, side / coarse_cells);
    low.order_tag = OrderTag::TwogridCoarse;
    TokenSequence high = tokenize_hilbert(bands.high, side / fine_cells);
    high.order_tag = OrderTag::TwogridFine;
    return {std::move(low), std::move(high)};
}

TokenSequence tokenize_fixed_tg(const GridImage& image, int coarse_order,
                                const std::set<int>& refine_mask) {
    const int coarse_grid = 1 << coarse_order;
    const int cell_count = coarse_grid * coarse_grid;
    for (int id : refine_mask)
        if (id < 0 || id >= cell_count)
            throw std::out_of_range("tokenize_fixed_tg: mask index " + std::to_string(id) +
                                    " outside [0, " + std::to_string(cell_count - 1) + "]");
    if (!image.is_square() || image.width % (2 * coarse_grid) != 0)
        throw std::invalid_argument("tokenize_fixed_tg: image side " + std::to_string(image.width) +
                                    " not divisible by 2^" + std::to_string(coarse_order + 1));

    const int patch = image.width / coarse_grid;
    TokenSequence seq;
    seq.geometry = PatchGeometry{image.width, patch, coarse_grid};
    seq.order_tag = OrderTag::FixedTg;

    const HilbertMap coarse = build_hilbert(coarse_order);
    const HilbertMap fine = build_hilbert(coarse_order + 1);
    const int sub = patch / 2;
    for (int p = 0; p < cell_count; ++p) {
        const auto& [pr, pc] = coarse.index_to_coord[p];
        if (refine_mask.count(pr * coarse_grid + pc)) {
            // Nesting: the order-(n+1) curve covers coarse curve position p at
            // fine indices 4p..4p+3, so in-place replacement keeps the
            // traversal continuous through the refined block.
            for (int k = 0; k < 4; ++k) {
                const auto& [fr, fc] = fine.index_to_coord[4 * p + k];
                PatchRect cell{fr * sub, fc * sub, sub};
                seq.cells.push_back(cell);
                seq.tokens.push_back(extract_patch(image, cell));
            }
        } else {
            PatchRect cell{pr * patch, pc * patch, patch};
            seq.cells.push_back(cell);
            seq.tokens.push_back(extract_patch(image, cell));
        }
    }
    return seq;
}

std::set<int> sample_refine_mask(int coarse_order, double p, uint64_t seed) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("sample_refine_mask: p must be in [0, 1], got " +
                                    std::to_string(p));
    const int cell_count = 1 << (2 * coarse_order);
    Rng rng(seed);
    std::set<int> mask;
    for (int id = 0; id < cell_count; ++id)
        if (rng.uniform() < p) mask.insert(id);
    return mask;
}

TokenSequence tokenize_ran_tg(const GridImage& image, int coarse_order, double p, uint64_t seed) {
    TokenSequence seq = tokenize_fixed_tg(image, coarse_order, sample_refine_mask(coarse_order, p, seed));
    seq.order_tag = OrderTag::RanTg;
    return seq;
}

std::set<int> central_refine_mask(int coarse_order) {
    const int g = 1 << coarse_order;
    if (g < 2) throw std::invalid_argument("central_refine_mask: order must be >= 1");
    const int lo = g / 2 - 1;
    return {lo * g + lo, lo * g + lo + 1, (lo + 1) * g + lo, (lo + 1) * g + lo + 1};
}

GridImage detokenize(const TokenSequence& seq) {
    const int side = seq.geometry.image_side;
    GridImage img(side, side);
    std::vector<char> covered(img.size(), 0);
    for (size_t i = 0; i < seq.cells.size(); ++i) {
        const PatchRect& cell = seq.cells[i];
        const auto& tok = seq.tokens[i];
        if (tok.size() != static_cast<size_t>(cell.side) * cell.side)
            throw std::invalid_argument("detokenize: token " + std::to_string(i) +
                                        " length does not match its cell");
        for (int r = 0; r < cell.side; ++r)
            for (int c = 0; c < cell.side; ++c) {
                const size_t idx =
                    static_cast<size_t>(cell.row0 + r) * side + (cell.col0 + c);
                img.pixels[idx] = tok[static_cast<size_t>(r) * cell.side + c];
                covered[idx] = 1;
            }
    }
    for (char f : covered)
        if (!f) throw std::invalid_argument("detokenize: cells do not cover the image");
    return img;
}

}  // namespace adatg
