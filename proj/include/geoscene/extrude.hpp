#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "geoscene/raster.hpp"
#include "geoscene/terrain.hpp"

namespace geoscene {

enum class HeightProvenance { Matched, Default };

/// Building footprint in EPSG:3857 meters (CCW) plus vertical extent.
struct Building {
    Ring footprint;
    double height = 0.0; // meters, > 0
    double base_z = 0.0; // meters
    std::int64_t way_id = 0;
    HeightProvenance provenance = HeightProvenance::Default;
};

/// Minimum bilinear elevation over the footprint vertices; vertices on
/// nodata are skipped. Throws NoElevationError when every vertex is nodata
/// or outside coverage.
double footprint_base_elevation(const Ring& r, const DemGrid& g);

/// Ear-clipping triangulation of a simple CCW polygon: exactly n-2
/// triangles, each counter-clockwise. Throws GeometryError for degenerate
/// or self-intersecting rings.
std::vector<std::array<std::uint32_t, 3>> triangulate_ring(const Ring& r);

/// Closed prism: n base vertices at base_z (indices 0..n-1), n roof
/// vertices at base_z + height (indices n..2n-1), triangulated base
/// (downward-facing) and roof (upward-facing), two triangles per wall edge.
TriMesh extrude_building(const Building& b);

} // namespace geoscene
