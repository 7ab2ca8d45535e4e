#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "geoscene/raster.hpp"

namespace geoscene {

/// Indexed triangle mesh with parallel coordinate arrays.
struct TriMesh {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> zs;
    std::vector<std::array<std::uint32_t, 3>> tris;

    std::size_t vertex_count() const { return xs.size(); }
    std::size_t triangle_count() const { return tris.size(); }
};

/// One vertex per valid pixel center, two counter-clockwise triangles per
/// 2x2 pixel quad whose four pixels are all valid, split along the
/// top-left to bottom-right diagonal. Vertices and quads are emitted in
/// row-major order. Throws EmptyInputError when no pixel is valid.
TriMesh build_terrain_mesh(const DemGrid& g);

} // namespace geoscene
