#pragma once

#include <string>
#include <vector>

#include "geoscene/scene.hpp"
#include "geoscene/sources.hpp"

namespace geoscene {

struct PipelineOptions {
    double spacing = 10.0;        // drape sample spacing, meters
    double road_offset = 1.0;     // meters above terrain
    double power_offset = 2.0;    // meters above terrain
    double default_height = 8.0;  // meters for unmatched footprints
    double resolution = 0.0;      // reprojection, meters; <= 0 selects auto
    std::string title;
};

struct VectorData {
    std::vector<OsmWay> roads;
    std::vector<OsmWay> power;
    std::vector<OsmWay> buildings;
};

/// Shared core of the service and the CLI: terrain meshing, draping,
/// height assignment and extrusion, figure assembly. The DEM may arrive in
/// either CRS; geographic grids are reprojected first. Height feature rings
/// in EPSG:4326 are projected as needed.
FigureDoc build_scene(const DemGrid& dem, const VectorData& vectors,
                      const std::vector<HeightFeature>& heights,
                      const PipelineOptions& opts,
                      std::vector<std::string>* warnings = nullptr);

} // namespace geoscene
