#pragma once

#include <vector>

namespace geoscene {

/// Spherical Web Mercator radius (EPSG:3857), meters.
inline constexpr double kEarthRadius = 6378137.0;

/// Mercator easting/northing of the (anti)meridian, pi * kEarthRadius.
inline constexpr double kMercatorMax = 20037508.342789244;

/// Latitudes beyond this band are rejected rather than clamped.
inline constexpr double kMercatorMaxLatitude = 85.06;

enum class Crs {
    Geographic, // EPSG:4326, degrees
    Mercator,   // EPSG:3857, meters
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Longitude/latitude in degrees east/north (EPSG:4326).
struct GeoPoint {
    double lon = 0.0;
    double lat = 0.0;
};

/// Easting/northing in meters (EPSG:3857).
struct MercatorPoint {
    double x = 0.0;
    double y = 0.0;
};

struct BBoxGeo {
    double west = 0.0;
    double south = 0.0;
    double east = 0.0;
    double north = 0.0;
};

struct BBoxMerc {
    double west = 0.0;
    double south = 0.0;
    double east = 0.0;
    double north = 0.0;
};

/// Closed polygon boundary; the first vertex is not repeated at the end.
struct Ring {
    std::vector<Vec2> pts;
    Crs crs = Crs::Mercator;
};

struct RingMetrics {
    double signed_area = 0.0; // shoelace; positive when counter-clockwise
    Vec2 centroid;
    bool is_ccw = false;
};

/// Forward spherical Web Mercator projection.
/// Throws DomainError when |lat| > 85.06 degrees.
MercatorPoint mercator_forward(const GeoPoint& p);

/// Analytic inverse of mercator_forward.
/// Throws DomainError when |x| or |y| exceeds pi * kEarthRadius.
GeoPoint mercator_inverse(const MercatorPoint& p);

/// Project all four corners of a geographic bbox.
BBoxMerc mercator_forward(const BBoxGeo& b);

/// Shoelace signed area, area-weighted centroid, and orientation.
/// Throws GeometryError for rings with fewer than 3 vertices or zero area.
RingMetrics ring_metrics(const Ring& r);

/// Even-odd ray-casting containment; boundary points may report either value.
bool point_in_ring(const Vec2& p, const Ring& r);

/// Reverse the vertex order when the ring is clockwise.
void normalize_ccw(Ring& r);

/// True when no two non-adjacent edges intersect and no adjacent edges
/// overlap; rings with fewer than 3 vertices are not simple.
bool is_simple(const Ring& r);

} // namespace geoscene
