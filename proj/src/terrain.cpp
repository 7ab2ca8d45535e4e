#include "geoscene/terrain.hpp"

#include <cstdint>
#include <vector>

#include "geoscene/errors.hpp"

namespace geoscene {

TriMesh build_terrain_mesh(const DemGrid& g) {
    const std::uint32_t kInvalid = 0xffffffffu;
    std::vector<std::uint32_t> index(g.values.size(), kInvalid);

    TriMesh mesh;
    std::uint32_t next = 0;
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            const double v = g.value(r, c);
            if (g.is_nodata_value(v)) continue;
            index[static_cast<std::size_t>(r) * g.width + c] = next++;
            mesh.xs.push_back(g.center_x(c));
            mesh.ys.push_back(g.center_y(r));
            mesh.zs.push_back(v);
        }
    }
    if (mesh.xs.empty())
        throw EmptyInputError("terrain mesh: raster has no valid pixels");

    // Two triangles per fully valid 2x2 quad, split along the TL-BR diagonal.
    // Winding is counter-clockwise seen from +z (rows advance southward).
    for (int r = 0; r + 1 < g.height; ++r) {
        for (int c = 0; c + 1 < g.width; ++c) {
            const std::uint32_t tl = index[static_cast<std::size_t>(r) * g.width + c];
            const std::uint32_t tr = index[static_cast<std::size_t>(r) * g.width + c + 1];
            const std::uint32_t bl = index[static_cast<std::size_t>(r + 1) * g.width + c];
            const std::uint32_t br = index[static_cast<std::size_t>(r + 1) * g.width + c + 1];
            if (tl == kInvalid || tr == kInvalid || bl == kInvalid || br == kInvalid)
                continue;
            mesh.tris.push_back({tl, bl, br});
            mesh.tris.push_back({tl, br, tr});
        }
    }
    return mesh;
}

} // namespace geoscene
