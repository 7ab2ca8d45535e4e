#include "geoscene/geomath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geoscene/errors.hpp"

namespace geoscene {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
// Tolerance for the |x| <= pi*R bounds check, absorbs one ulp of rounding
// at the antimeridian.
constexpr double kBoundsEps = 1e-6;

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Proper or improper intersection of segments ab and cd.
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = cross2(c, d, a);
    const double d2 = cross2(c, d, b);
    const double d3 = cross2(a, b, c);
    const double d4 = cross2(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(c, d, a)) return true;
    if (d2 == 0 && on_segment(c, d, b)) return true;
    if (d3 == 0 && on_segment(a, b, c)) return true;
    if (d4 == 0 && on_segment(a, b, d)) return true;
    return false;
}

} // namespace

MercatorPoint mercator_forward(const GeoPoint& p) {
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat))
        throw DomainError("mercator_forward: non-finite coordinate");
    if (std::abs(p.lat) > kMercatorMaxLatitude)
        throw DomainError("mercator_forward: latitude " + std::to_string(p.lat) +
                          " outside the +-85.06 degree band");
    const double lon_rad = p.lon * kDegToRad;
    const double lat_rad = p.lat * kDegToRad;
    // asinh(tan(phi)) = ln(tan(pi/4 + phi/2)), but exact at the equator where
    // the log-tan form loses ~1e-16 to the pi/4 rounding.
    return {kEarthRadius * lon_rad, kEarthRadius * std::asinh(std::tan(lat_rad))};
}

GeoPoint mercator_inverse(const MercatorPoint& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw DomainError("mercator_inverse: non-finite coordinate");
    if (std::abs(p.x) > kMercatorMax + kBoundsEps || std::abs(p.y) > kMercatorMax + kBoundsEps)
        throw DomainError("mercator_inverse: coordinate outside the projection square");
    const double lon = (p.x / kEarthRadius) * kRadToDeg;
    const double lat =
        (2.0 * std::atan(std::exp(p.y / kEarthRadius)) - std::numbers::pi / 2.0) * kRadToDeg;
    return {lon, lat};
}

BBoxMerc mercator_forward(const BBoxGeo& b) {
    const MercatorPoint sw = mercator_forward(GeoPoint{b.west, b.south});
    const MercatorPoint ne = mercator_forward(GeoPoint{b.east, b.north});
    return {sw.x, sw.y, ne.x, ne.y};
}

RingMetrics ring_metrics(const Ring& r) {
    const auto& pts = r.pts;
    const std::size_t n = pts.size();
    if (n < 3) throw GeometryError("ring_metrics: ring needs at least 3 vertices");

    double area2 = 0.0; // twice the signed area
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        const double cross = a.x * b.y - b.x * a.y;
        area2 += cross;
        cx += (a.x + b.x) * cross;
        cy += (a.y + b.y) * cross;
    }
    if (area2 == 0.0) throw GeometryError("ring_metrics: degenerate ring with zero area");

    RingMetrics m;
    m.signed_area = area2 / 2.0;
    m.centroid = {cx / (3.0 * area2), cy / (3.0 * area2)};
    m.is_ccw = m.signed_area > 0.0;
    return m;
}

bool point_in_ring(const Vec2& p, const Ring& r) {
    const auto& pts = r.pts;
    const std::size_t n = pts.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[j];
        const bool crosses = (a.y > p.y) != (b.y > p.y);
        if (crosses && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
            inside = !inside;
    }
    return inside;
}

void normalize_ccw(Ring& r) {
    if (!ring_metrics(r).is_ccw) std::reverse(r.pts.begin(), r.pts.end());
}

bool is_simple(const Ring& r) {
    const auto& pts = r.pts;
    const std::size_t n = pts.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        if (a.x == b.x && a.y == b.y) return false; // zero-length edge
        for (std::size_t j = i + 1; j < n; ++j) {
            // Adjacent edges share exactly one endpoint; only non-adjacent
            // pairs are tested for intersection.
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            const Vec2& c = pts[j];
            const Vec2& d = pts[(j + 1) % n];
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

} // namespace geoscene
