#include "geoscene/drape.hpp"

#include <cmath>

#include "geoscene/errors.hpp"

namespace geoscene {

Polyline densify_polyline(const Polyline& p, double spacing) {
    if (spacing <= 0.0) throw DomainError("densify: spacing must be positive");
    Polyline out;
    out.source = p.source;
    out.way_id = p.way_id;
    out.klass = p.klass;
    if (p.pts.size() < 2) {
        out.pts = p.pts;
        return out;
    }

    out.pts.push_back(p.pts.front());
    for (std::size_t i = 0; i + 1 < p.pts.size(); ++i) {
        const Vec2 a = p.pts[i];
        const Vec2 b = p.pts[i + 1];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        // Each edge is cut into equal parts, none longer than the spacing.
        const int parts = len > 0.0 ? static_cast<int>(std::ceil(len / spacing)) : 1;
        for (int k = 1; k < parts; ++k) {
            const double t = static_cast<double>(k) / parts;
            out.pts.push_back(Vec2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
        out.pts.push_back(b);
    }
    return out;
}

Path3D drape_polylines(const std::vector<Polyline>& ps, const DemGrid& g,
                       double spacing, double z_offset) {
    if (g.crs != Crs::Mercator)
        throw DomainError("drape: elevation grid must be in web mercator");

    Path3D path;
    for (const auto& line : ps) {
        const Polyline dense = densify_polyline(line, spacing);
        std::vector<Vec3> run;
        auto flush = [&] {
            // A single stranded point cannot form a segment.
            if (run.size() >= 2) path.segments.push_back(run);
            run.clear();
        };
        for (const Vec2& p : dense.pts) {
            const auto z = sample_bilinear(g, p.x, p.y);
            if (!z) {
                flush();
                continue;
            }
            run.push_back(Vec3{p.x, p.y, *z + z_offset});
        }
        flush();
    }
    return path;
}

} // namespace geoscene
