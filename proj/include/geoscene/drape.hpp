#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geoscene/raster.hpp"

namespace geoscene {

enum class PathSource { Road, Power };

/// 2D polyline in EPSG:3857 meters; consecutive vertices are distinct.
struct Polyline {
    std::vector<Vec2> pts;
    PathSource source = PathSource::Road;
    std::int64_t way_id = 0;
    std::string klass; // highway= / power= tag value
};

/// 3D polyline segments; a break is rendered between consecutive segments.
struct Path3D {
    std::vector<std::vector<Vec3>> segments;

    std::size_t point_count() const {
        std::size_t n = 0;
        for (const auto& s : segments) n += s.size();
        return n;
    }
};

/// Subdivide each edge of length L into ceil(L / spacing) equal parts.
/// Original vertices are always retained. Throws DomainError when
/// spacing <= 0.
Polyline densify_polyline(const Polyline& p, double spacing);

/// Densify each polyline, then assign z = bilinear DEM elevation + z_offset
/// at every sample. Samples on nodata or outside coverage are dropped and
/// split the polyline into separate segments; runs shorter than 2 points
/// are discarded.
Path3D drape_polylines(const std::vector<Polyline>& ps, const DemGrid& g,
                       double spacing, double z_offset);

} // namespace geoscene
