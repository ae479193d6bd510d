#include "adatg/hilbert.hpp"

namespace adatg {

namespace {

// One recursion step: H_{n+1} is assembled from four copies of H_n placed in
// quadrant order top-left, top-right, bottom-right, bottom-left. The first
// copy is transposed and the last anti-transposed; the middle two are plain
// translations. This realizes the "rotated and reflected" copies on a
// discrete grid and keeps the curve continuous across quadrant seams.
std::vector<std::pair<int, int>> expand(const std::vector<std::pair<int, int>>& prev, int prev_side) {
    const int s = prev_side;
    std::vector<std::pair<int, int>> next;
    next.reserve(prev.size() * 4);
    for (const auto& [r, c] : prev) next.emplace_back(c, r);                        // transpose
    for (const auto& [r, c] : prev) next.emplace_back(r, c + s);                    // translate
    for (const auto& [r, c] : prev) next.emplace_back(r + s, c + s);                // translate
    for (const auto& [r, c] : prev) next.emplace_back(2 * s - 1 - c, s - 1 - r);    // anti-transpose
    return next;
}

}  // namespace

HilbertMap build_hilbert(int order) {
    if (order < 1 || order > 12)
        throw std::invalid_argument("build_hilbert: order must be in [1, 12], got " +
                                    std::to_string(order));

    std::vector<std::pair<int, int>> coords = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    int side = 2;
    for (int n = 1; n < order; ++n) {
        coords = expand(coords, side);
        side *= 2;
    }

    HilbertMap map;
    map.order = order;
    map.side = side;
    map.index_to_coord = std::move(coords);
    map.coord_to_index.assign(map.index_to_coord.size(), -1);
    for (size_t i = 0; i < map.index_to_coord.size(); ++i) {
        const auto& [r, c] = map.index_to_coord[i];
        map.coord_to_index[static_cast<size_t>(r) * side + c] = static_cast<int>(i);
    }
    return map;
}

int curve_index(const HilbertMap& map, int row, int col) {
    if (row < 0 || col < 0 || row >= map.side || col >= map.side)
        throw std::out_of_range("curve_index: coordinate (" + std::to_string(row) + ", " +
                                std::to_string(col) + ") outside " + std::to_string(map.side) +
                                "x" + std::to_string(map.side) + " grid");
    return map.coord_to_index[static_cast<size_t>(row) * map.side + col];
}

}  // namespace adatg
