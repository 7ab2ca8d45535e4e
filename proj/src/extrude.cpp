#include "geoscene/extrude.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "geoscene/errors.hpp"

namespace geoscene {

namespace {

double orient(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Closed test: vertices on the ear boundary block it, so overlapping
// triangles are never emitted for near-degenerate input.
bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
    return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
}

} // namespace

double footprint_base_elevation(const Ring& r, const DemGrid& g) {
    if (r.crs != g.crs)
        throw DomainError("footprint elevation: ring and grid are in different CRSs");
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const Vec2& p : r.pts) {
        const auto z = sample_bilinear(g, p.x, p.y);
        if (!z) continue;
        best = std::min(best, *z);
        any = true;
    }
    if (!any)
        throw NoElevationError(
            "footprint elevation: no footprint vertex has valid elevation data");
    return best;
}

std::vector<std::array<std::uint32_t, 3>> triangulate_ring(const Ring& r) {
    const std::size_t n = r.pts.size();
    if (n < 3) throw GeometryError("triangulate: ring needs at least 3 vertices");

    // Ear clipping runs on a CCW vertex order; CW rings are triangulated on
    // the reversed sequence and indices mapped back afterwards.
    const RingMetrics m = ring_metrics(r);
    std::vector<Vec2> pts = r.pts;
    if (!m.is_ccw) std::reverse(pts.begin(), pts.end());

    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);

    std::vector<std::array<std::uint32_t, 3>> tris;
    tris.reserve(n - 2);

    while (idx.size() > 3) {
        bool clipped = false;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const std::size_t kp = (k + idx.size() - 1) % idx.size();
            const std::size_t kn = (k + 1) % idx.size();
            const Vec2& a = pts[idx[kp]];
            const Vec2& b = pts[idx[k]];
            const Vec2& c = pts[idx[kn]];
            if (orient(a, b, c) <= 0.0) continue; // reflex or collinear corner
            bool blocked = false;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                if (j == k || j == kp || j == kn) continue;
                if (in_triangle(pts[idx[j]], a, b, c)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tris.push_back({idx[kp], idx[k], idx[kn]});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
            clipped = true;
            break;
        }
        if (!clipped)
            throw GeometryError(
                "triangulate: no ear found; ring is degenerate or self-intersecting");
    }
    tris.push_back({idx[0], idx[1], idx[2]});

    if (!m.is_ccw) {
        const auto last = static_cast<std::uint32_t>(n - 1);
        for (auto& t : tris)
            for (auto& v : t) v = last - v;
    }
    return tris;
}

TriMesh extrude_building(const Building& b) {
    const std::size_t n = b.footprint.pts.size();
    if (n < 3) throw GeometryError("extrude: footprint needs at least 3 vertices");
    if (!(b.height > 0.0)) throw GeometryError("extrude: height must be positive");

    Ring ccw = b.footprint;
    normalize_ccw(ccw);
    const auto roof = triangulate_ring(ccw);

    TriMesh mesh;
    mesh.xs.reserve(2 * n);
    mesh.ys.reserve(2 * n);
    mesh.zs.reserve(2 * n);
    for (const Vec2& p : ccw.pts) {
        mesh.xs.push_back(p.x);
        mesh.ys.push_back(p.y);
        mesh.zs.push_back(b.base_z);
    }
    for (const Vec2& p : ccw.pts) {
        mesh.xs.push_back(p.x);
        mesh.ys.push_back(p.y);
        mesh.zs.push_back(b.base_z + b.height);
    }

    mesh.tris.reserve(4 * n - 4);
    const auto un = static_cast<std::uint32_t>(n);
    // Base faces down: roof triangulation with reversed winding.
    for (const auto& t : roof) mesh.tris.push_back({t[0], t[2], t[1]});
    // Roof faces up, shifted onto the upper vertex ring.
    for (const auto& t : roof) mesh.tris.push_back({t[0] + un, t[1] + un, t[2] + un});
    // Walls: one quad per footprint edge, split into two outward triangles.
    for (std::uint32_t i = 0; i < un; ++i) {
        const std::uint32_t j = (i + 1) % un;
        mesh.tris.push_back({i, j, j + un});
        mesh.tris.push_back({i, j + un, i + un});
    }
    return mesh;
}

} // namespace geoscene
