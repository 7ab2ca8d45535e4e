#include "geoscene/pipeline.hpp"

#include <string>
#include <utility>
#include <vector>

#include "geoscene/drape.hpp"
#include "geoscene/errors.hpp"
#include "geoscene/extrude.hpp"
#include "geoscene/terrain.hpp"

namespace geoscene {

namespace {

void warn(std::vector<std::string>* warnings, std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
}

Ring project_ring(const Ring& r) {
    if (r.crs == Crs::Mercator) return r;
    Ring out;
    out.crs = Crs::Mercator;
    out.pts.reserve(r.pts.size());
    for (const Vec2& p : r.pts) {
        const MercatorPoint m = mercator_forward(GeoPoint{p.x, p.y});
        out.pts.push_back(Vec2{m.x, m.y});
    }
    return out;
}

std::vector<Polyline> project_ways(const std::vector<OsmWay>& ways,
                                   PathSource source, const char* tag_key) {
    std::vector<Polyline> out;
    out.reserve(ways.size());
    for (const OsmWay& w : ways) {
        Polyline line;
        line.source = source;
        line.way_id = w.id;
        if (auto it = w.tags.find(tag_key); it != w.tags.end()) line.klass = it->second;
        for (const Vec2& ll : w.coords) {
            const MercatorPoint m = mercator_forward(GeoPoint{ll.x, ll.y});
            const Vec2 p{m.x, m.y};
            // Snapped duplicate vertices add nothing to the path.
            if (!line.pts.empty() && line.pts.back().x == p.x &&
                line.pts.back().y == p.y)
                continue;
            line.pts.push_back(p);
        }
        if (line.pts.size() >= 2) out.push_back(std::move(line));
    }
    return out;
}

} // namespace

FigureDoc build_scene(const DemGrid& dem, const VectorData& vectors,
                      const std::vector<HeightFeature>& heights,
                      const PipelineOptions& opts,
                      std::vector<std::string>* warnings) {
    const DemGrid* grid = &dem;
    DemGrid reprojected;
    if (dem.crs == Crs::Geographic) {
        reprojected = reproject_to_mercator(dem, opts.resolution);
        grid = &reprojected;
    }

    const TriMesh terrain = build_terrain_mesh(*grid);

    const Path3D roads = drape_polylines(project_ways(vectors.roads, PathSource::Road,
                                                      "highway"),
                                         *grid, opts.spacing, opts.road_offset);
    const Path3D power = drape_polylines(project_ways(vectors.power, PathSource::Power,
                                                      "power"),
                                         *grid, opts.spacing, opts.power_offset);

    // Building footprints: closed ways only, reprojected and matched to
    // height polygons by centroid containment.
    std::vector<Ring> footprints;
    std::vector<std::int64_t> footprint_ids;
    for (const OsmWay& w : vectors.buildings) {
        if (!w.closed()) {
            warn(warnings, "building way " + std::to_string(w.id) +
                               " is not closed; skipped");
            continue;
        }
        Ring r;
        r.crs = Crs::Geographic;
        r.pts.assign(w.coords.begin(), w.coords.end() - 1); // drop closing vertex
        if (r.pts.size() < 3) {
            warn(warnings, "building way " + std::to_string(w.id) +
                               " has fewer than 3 distinct vertices; skipped");
            continue;
        }
        footprints.push_back(project_ring(r));
        footprint_ids.push_back(w.id);
    }

    std::vector<HeightFeature> merc_heights;
    merc_heights.reserve(heights.size());
    for (const HeightFeature& h : heights)
        merc_heights.push_back(HeightFeature{project_ring(h.ring), h.height});

    std::vector<Building> buildings =
        assign_heights(footprints, merc_heights, opts.default_height);

    std::vector<TriMesh> building_meshes;
    building_meshes.reserve(buildings.size());
    for (std::size_t n = 0; n < buildings.size(); ++n) {
        Building& b = buildings[n];
        b.way_id = footprint_ids[n];
        try {
            b.base_z = footprint_base_elevation(b.footprint, *grid);
            building_meshes.push_back(extrude_building(b));
        } catch (const NoElevationError&) {
            warn(warnings, "building way " + std::to_string(b.way_id) +
                               " has no elevation coverage; skipped");
        } catch (const GeometryError& e) {
            warn(warnings, "building way " + std::to_string(b.way_id) + ": " +
                               e.what() + "; skipped");
        }
    }

    SceneStyle style;
    style.title = opts.title;
    return assemble_figure(terrain, roads, power, building_meshes, style);
}

} // namespace geoscene
