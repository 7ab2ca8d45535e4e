#include "geoscene/sources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "geoscene/errors.hpp"

namespace geoscene {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Overpass bbox filter: (south,west,north,east).
std::string bbox_filter(const BBoxGeo& b) {
    return "(" + format_double(b.south) + "," + format_double(b.west) + "," +
           format_double(b.north) + "," + format_double(b.east) + ")";
}

json parse_json(const std::string& text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw ParseError(std::string(what) + ": response is not valid JSON");
    return doc;
}

Ring ring_from_geojson(const json& coords) {
    Ring r;
    r.crs = Crs::Geographic;
    for (const auto& pos : coords) {
        if (!pos.is_array() || pos.size() < 2)
            throw ParseError("geojson: ring position is not a [lon, lat] pair");
        r.pts.push_back(Vec2{pos[0].get<double>(), pos[1].get<double>()});
    }
    // GeoJSON rings repeat the first vertex at the end; Ring does not.
    if (r.pts.size() >= 2) {
        const Vec2& a = r.pts.front();
        const Vec2& b = r.pts.back();
        if (a.x == b.x && a.y == b.y) r.pts.pop_back();
    }
    if (r.pts.size() < 3) throw ParseError("geojson: ring has fewer than 3 vertices");
    return r;
}

BBoxGeo ring_envelope(const Ring& r) {
    BBoxGeo b{r.pts[0].x, r.pts[0].y, r.pts[0].x, r.pts[0].y};
    for (const Vec2& p : r.pts) {
        b.west = std::min(b.west, p.x);
        b.south = std::min(b.south, p.y);
        b.east = std::max(b.east, p.x);
        b.north = std::max(b.north, p.y);
    }
    return b;
}

Vec2 rough_centroid(const Ring& r) {
    try {
        return ring_metrics(r).centroid;
    } catch (const GeometryError&) {
        // Degenerate ring: fall back to the vertex mean so matching stays total.
        Vec2 acc{0.0, 0.0};
        for (const Vec2& p : r.pts) {
            acc.x += p.x;
            acc.y += p.y;
        }
        const double n = static_cast<double>(r.pts.size());
        return Vec2{acc.x / n, acc.y / n};
    }
}

} // namespace

std::string geocoder_query_path(const std::string& place) {
    return "/search?q=" + percent_encode(place) +
           "&format=geojson&polygon_geojson=1&limit=1";
}

std::string dem_query_path(const BBoxGeo& bbox, const std::string& api_key) {
    return "/API/globaldem?demtype=COP30&south=" + format_double(bbox.south) +
           "&north=" + format_double(bbox.north) + "&west=" + format_double(bbox.west) +
           "&east=" + format_double(bbox.east) +
           "&outputFormat=GTiff&API_Key=" + percent_encode(api_key);
}

std::string overpass_query(const BBoxGeo& bbox, OsmLayer layer) {
    const std::string bb = bbox_filter(bbox);
    std::string clauses;
    switch (layer) {
        case OsmLayer::Road:
            clauses =
                "way[\"highway\"~\"^(motorway|trunk|primary|secondary|tertiary|"
                "unclassified|residential|service|living_street|motorway_link|"
                "trunk_link|primary_link|secondary_link|tertiary_link)$\"]" +
                bb + ";";
            break;
        case OsmLayer::Power:
            clauses = "way[\"power\"=\"line\"]" + bb + ";" +
                      "way[\"power\"=\"minor_line\"]" + bb + ";" +
                      "way[\"power\"=\"cable\"]" + bb + ";" +
                      "way[\"power\"=\"major_line\"]" + bb + ";";
            break;
        case OsmLayer::Building:
            clauses = "way[\"building\"]" + bb + ";";
            break;
    }
    return "[out:json][timeout:60];(" + clauses + ");out body; >; out skel qt;";
}

GeocodedArea parse_geocoder_response(const std::string& json_text,
                                     double point_fallback_half_width_m) {
    const json doc = parse_json(json_text, "geocoder");
    const auto features = doc.value("features", json::array());
    if (features.empty())
        throw PlaceNotFoundError("geocoder: no result for the requested place");

    const json& f = features[0];
    GeocodedArea area;
    if (f.contains("properties") && f["properties"].contains("display_name"))
        area.display_name = f["properties"]["display_name"].get<std::string>();

    if (!f.contains("geometry") || !f["geometry"].contains("type"))
        throw ParseError("geocoder: first feature has no geometry");
    const json& geom = f["geometry"];
    const std::string type = geom["type"].get<std::string>();

    if (type == "Polygon") {
        area.boundary = ring_from_geojson(geom["coordinates"][0]);
    } else if (type == "MultiPolygon") {
        area.boundary = ring_from_geojson(geom["coordinates"][0][0]);
    } else if (type == "Point") {
        // Square of the configured half-width around the point.
        const double lon = geom["coordinates"][0].get<double>();
        const double lat = geom["coordinates"][1].get<double>();
        const double m_per_deg = kEarthRadius * std::numbers::pi / 180.0;
        const double dlat = point_fallback_half_width_m / m_per_deg;
        const double dlon =
            point_fallback_half_width_m /
            (m_per_deg * std::cos(lat * std::numbers::pi / 180.0));
        area.boundary.crs = Crs::Geographic;
        area.boundary.pts = {Vec2{lon - dlon, lat - dlat}, Vec2{lon + dlon, lat - dlat},
                             Vec2{lon + dlon, lat + dlat}, Vec2{lon - dlon, lat + dlat}};
    } else {
        throw ParseError("geocoder: unsupported geometry type '" + type + "'");
    }
    area.bbox = ring_envelope(area.boundary);
    return area;
}

std::vector<OsmWay> parse_overpass_json(const std::string& json_text,
                                        std::vector<std::string>* warnings) {
    const json doc = parse_json(json_text, "overpass");
    if (!doc.contains("elements") || !doc["elements"].is_array())
        throw ParseError("overpass: response has no elements array");

    struct NodePos {
        double lon, lat;
    };
    std::unordered_map<std::int64_t, NodePos> nodes;
    for (const auto& el : doc["elements"]) {
        if (el.value("type", "") != "node") continue;
        if (!el.contains("id") || !el.contains("lon") || !el.contains("lat"))
            throw ParseError("overpass: node element missing id/lon/lat");
        nodes[el["id"].get<std::int64_t>()] =
            NodePos{el["lon"].get<double>(), el["lat"].get<double>()};
    }

    std::vector<OsmWay> ways;
    for (const auto& el : doc["elements"]) {
        if (el.value("type", "") != "way") continue;
        OsmWay w;
        w.id = el.value("id", std::int64_t{0});
        if (el.contains("tags"))
            for (auto it = el["tags"].begin(); it != el["tags"].end(); ++it)
                w.tags[it.key()] = it.value().get<std::string>();

        bool resolved = true;
        for (const auto& ref : el.value("nodes", json::array())) {
            const std::int64_t nid = ref.get<std::int64_t>();
            const auto found = nodes.find(nid);
            if (found == nodes.end()) {
                if (warnings)
                    warnings->push_back("way " + std::to_string(w.id) +
                                        " references missing node " +
                                        std::to_string(nid) + "; dropped");
                resolved = false;
                break;
            }
            w.node_ids.push_back(nid);
            w.coords.push_back(Vec2{found->second.lon, found->second.lat});
        }
        if (!resolved) continue;
        if (w.node_ids.size() < 2) {
            if (warnings)
                warnings->push_back("way " + std::to_string(w.id) +
                                    " has fewer than 2 nodes; dropped");
            continue;
        }
        ways.push_back(std::move(w));
    }
    return ways;
}

std::vector<HeightFeature> parse_height_geojson(const std::string& json_text) {
    const json doc = parse_json(json_text, "height provider");
    std::vector<HeightFeature> out;
    for (const auto& f : doc.value("features", json::array())) {
        if (!f.contains("geometry") || f["geometry"].value("type", "") != "Polygon")
            continue;
        if (!f.contains("properties") || !f["properties"].contains("height"))
            continue;
        const json& h = f["properties"]["height"];
        if (!h.is_number()) continue;
        const double height = h.get<double>();
        if (!(height > 0.0)) continue;
        HeightFeature hf;
        hf.ring = ring_from_geojson(f["geometry"]["coordinates"][0]);
        hf.height = height;
        out.push_back(std::move(hf));
    }
    return out;
}

GeocodedArea geocode_place(UpstreamClient& client, const std::string& place,
                           double point_fallback_half_width_m) {
    if (place.empty()) throw BadRequestError("geocode: empty place name");
    const HttpResponse res = client.get(geocoder_query_path(place));
    if (res.status != 200)
        throw UpstreamError(res.status,
                            "geocoder returned status " + std::to_string(res.status));
    return parse_geocoder_response(res.body, point_fallback_half_width_m);
}

std::string fetch_dem(UpstreamClient& client, const BBoxGeo& bbox,
                      const std::string& api_key) {
    if (api_key.empty()) throw InvalidKeyError("dem: empty API key");
    const HttpResponse res = client.get(dem_query_path(bbox, api_key));
    if (res.status == 401)
        throw InvalidKeyError("dem: elevation service rejected the API key");
    if (res.status != 200)
        throw UpstreamError(res.status,
                            "dem service returned status " + std::to_string(res.status));
    return res.body;
}

std::vector<OsmWay> fetch_osm_layer(UpstreamClient& client, const BBoxGeo& bbox,
                                    OsmLayer layer,
                                    std::vector<std::string>* warnings) {
    const std::string body = "data=" + percent_encode(overpass_query(bbox, layer));
    const HttpResponse res = client.post_form("/api/interpreter", body);
    if (res.status != 200)
        throw UpstreamError(res.status,
                            "overpass returned status " + std::to_string(res.status));
    return parse_overpass_json(res.body, warnings);
}

FileHeightProvider::FileHeightProvider(std::string path) : path_(std::move(path)) {}

std::vector<HeightFeature> FileHeightProvider::load(const BBoxGeo&) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw ParseError("height provider: cannot read file " + path_);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_height_geojson(ss.str());
}

HttpHeightProvider::HttpHeightProvider(std::string base_url, HttpOptions opts)
    : client_(std::move(base_url), opts) {}

std::vector<HeightFeature> HttpHeightProvider::load(const BBoxGeo& bbox) {
    const std::string path = "/heights?west=" + format_double(bbox.west) +
                             "&south=" + format_double(bbox.south) +
                             "&east=" + format_double(bbox.east) +
                             "&north=" + format_double(bbox.north);
    const HttpResponse res = client_.get(path);
    if (res.status != 200)
        throw UpstreamError(res.status, "height provider returned status " +
                                            std::to_string(res.status));
    return parse_height_geojson(res.body);
}

std::vector<Building> assign_heights(const std::vector<Ring>& footprints,
                                     const std::vector<HeightFeature>& features,
                                     double default_h) {
    if (!(default_h > 0.0))
        throw DomainError("assign_heights: default height must be positive");

    std::vector<Vec2> feature_centroids;
    feature_centroids.reserve(features.size());
    for (const auto& f : features) feature_centroids.push_back(rough_centroid(f.ring));

    std::vector<Building> out;
    out.reserve(footprints.size());
    for (const Ring& fp : footprints) {
        const Vec2 c = rough_centroid(fp);
        int best = -1;
        double best_d2 = 0.0;
        for (std::size_t i = 0; i < features.size(); ++i) {
            if (!point_in_ring(c, features[i].ring)) continue;
            const double dx = feature_centroids[i].x - c.x;
            const double dy = feature_centroids[i].y - c.y;
            const double d2 = dx * dx + dy * dy;
            if (best < 0 || d2 < best_d2) {
                best = static_cast<int>(i);
                best_d2 = d2;
            }
        }
        Building b;
        b.footprint = fp;
        if (best >= 0) {
            b.height = features[static_cast<std::size_t>(best)].height;
            b.provenance = HeightProvenance::Matched;
        } else {
            b.height = default_h;
            b.provenance = HeightProvenance::Default;
        }
        out.push_back(std::move(b));
    }
    return out;
}

} // namespace geoscene
