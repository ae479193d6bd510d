#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adatg {

// Order-n Hilbert curve over a 2^n x 2^n grid as a pair of exact lookup
// tables. Convention: coordinates are (row, col); the base case visits
//   (0,0) -> (0,1) -> (1,1) -> (1,0),
// i.e. the curve starts in the top-left cell and ends in the bottom-left
// cell. Higher orders connect four transformed copies of the previous order
// (transpose for the first quadrant, anti-transpose for the last) so that
// consecutive indices always sit at Manhattan distance 1.
//
// Immutable after construction; safe to share across threads.
struct HilbertMap {
    int order = 0;
    int side = 0;                                    // 2^order
    std::vector<std::pair<int, int>> index_to_coord; // size 4^order, (row, col)
    std::vector<int> coord_to_index;                 // row-major, exact inverse
};

// Builds the lookup tables for 1 <= order <= 12.
HilbertMap build_hilbert(int order);

// Inverse lookup: curve index of cell (row, col). Throws on out-of-grid input.
int curve_index(const HilbertMap& map, int row, int col);

// Reorders a row-major sequence of 4^order cells into curve order:
// output[i] = cells[row_major(index_to_coord[i])].
template <typename T>
std::vector<T> permute_grid(const HilbertMap& map, const std::vector<T>& cells) {
    if (cells.size() != map.index_to_coord.size())
        throw std::invalid_argument("permute_grid: expected " +
                                    std::to_string(map.index_to_coord.size()) + " cells, got " +
                                    std::to_string(cells.size()));
    std::vector<T> out;
    out.reserve(cells.size());
    for (const auto& [r, c] : map.index_to_coord)
        out.push_back(cells[static_cast<size_t>(r) * map.side + c]);
    return out;
}

// Exact inverse of permute_grid.
template <typename T>
std::vector<T> unpermute_grid(const HilbertMap& map, const std::vector<T>& curve_ordered) {
    if (curve_ordered.size() != map.index_to_coord.size())
        throw std::invalid_argument("unpermute_grid: expected " +
                                    std::to_string(map.index_to_coord.size()) + " cells, got " +
                                    std::to_string(curve_ordered.size()));
    std::vector<T> out(curve_ordered.size());
    for (size_t i = 0; i < curve_ordered.size(); ++i) {
        const auto& [r, c] = map.index_to_coord[i];
        out[static_cast<size_t>(r) * map.side + c] = curve_ordered[i];
    }
    return out;
}

}  // namespace adatg
