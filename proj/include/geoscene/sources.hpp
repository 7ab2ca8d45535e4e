#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "geoscene/extrude.hpp"
#include "geoscene/geomath.hpp"
#include "geoscene/net.hpp"

namespace geoscene {

/// Geocoder result: outer boundary ring (EPSG:4326) and its envelope.
struct GeocodedArea {
    std::string display_name;
    Ring boundary;
    BBoxGeo bbox;
};

struct OsmWay {
    std::int64_t id = 0;
    std::vector<std::int64_t> node_ids;
    std::vector<Vec2> coords; // lon/lat, one per node reference
    std::map<std::string, std::string> tags;

    bool closed() const {
        return node_ids.size() >= 2 && node_ids.front() == node_ids.back();
    }
};

enum class OsmLayer { Road, Power, Building };

/// Height polygon from the building-height provider.
struct HeightFeature {
    Ring ring;
    double height = 0.0; // meters, > 0
};

// Query builders; deterministic for identical inputs.
std::string geocoder_query_path(const std::string& place);
std::string dem_query_path(const BBoxGeo& bbox, const std::string& api_key);
std::string overpass_query(const BBoxGeo& bbox, OsmLayer layer);

// Response parsers; pure.
GeocodedArea parse_geocoder_response(const std::string& json_text,
                                     double point_fallback_half_width_m = 1000.0);
std::vector<OsmWay> parse_overpass_json(const std::string& json_text,
                                        std::vector<std::string>* warnings = nullptr);
std::vector<HeightFeature> parse_height_geojson(const std::string& json_text);

/// Resolve a place name to its boundary polygon and bbox. Point-only
/// results fall back to a square bbox of the configured half-width.
/// Throws PlaceNotFoundError on an empty result list.
GeocodedArea geocode_place(UpstreamClient& client, const std::string& place,
                           double point_fallback_half_width_m = 1000.0);

/// Fetch COP30 GeoTIFF bytes for a bbox. 401 throws InvalidKeyError; other
/// upstream failures throw UpstreamError with the status.
std::string fetch_dem(UpstreamClient& client, const BBoxGeo& bbox,
                      const std::string& api_key);

/// Query Overpass for one layer and resolve way node references to
/// coordinates. Ways referencing missing nodes are dropped with a warning.
std::vector<OsmWay> fetch_osm_layer(UpstreamClient& client, const BBoxGeo& bbox,
                                    OsmLayer layer,
                                    std::vector<std::string>* warnings = nullptr);

/// Source of building-height polygons for an area of interest.
class HeightProvider {
public:
    virtual ~HeightProvider() = default;
    virtual std::vector<HeightFeature> load(const BBoxGeo& bbox) = 0;
};

/// Reads one GeoJSON FeatureCollection from disk; the bbox is ignored.
class FileHeightProvider : public HeightProvider {
public:
    explicit FileHeightProvider(std::string path);
    std::vector<HeightFeature> load(const BBoxGeo& bbox) override;

private:
    std::string path_;
};

/// Fetches the same GeoJSON document from a remote endpoint, passing the
/// bbox as west/south/east/north query parameters.
class HttpHeightProvider : public HeightProvider {
public:
    HttpHeightProvider(std::string base_url, HttpOptions opts = {});
    std::vector<HeightFeature> load(const BBoxGeo& bbox) override;

private:
    UpstreamClient client_;
};

/// Match each footprint to the height feature containing its centroid
/// (nearest feature centroid wins ties); unmatched footprints get
/// default_h with Default provenance. Footprints and features must both be
/// in EPSG:3857. base_z is left 0 for the extrusion stage to fill.
std::vector<Building> assign_heights(const std::vector<Ring>& footprints,
                                     const std::vector<HeightFeature>& features,
                                     double default_h);

} // namespace geoscene
