#include "geoscene/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoscene/errors.hpp"
#include "geoscene/geotiff.hpp"
#include "geoscene/scene.hpp"
#include "geoscene/service.hpp"

namespace geoscene {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DemGrid load_dem(const std::string& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() >= 4 && (bytes.compare(0, 2, "II") == 0 ||
                              bytes.compare(0, 2, "MM") == 0))
        return parse_geotiff(std::span(
            reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
    return parse_ascii_grid(bytes);
}

// GeoJSON LineString/Polygon features as ways with synthetic node ids.
std::vector<OsmWay> ways_from_geojson(const json& doc) {
    std::vector<OsmWay> ways;
    std::int64_t next_way = 1;
    std::int64_t next_node = 1;

    auto coords_to_way = [&](const json& coords, bool close) {
        OsmWay w;
        w.id = next_way++;
        for (const auto& pos : coords) {
            w.coords.push_back(Vec2{pos[0].get<double>(), pos[1].get<double>()});
            w.node_ids.push_back(next_node++);
        }
        if (w.coords.size() >= 2) {
            const Vec2& a = w.coords.front();
            const Vec2& b = w.coords.back();
            if (close || (a.x == b.x && a.y == b.y)) w.node_ids.back() = w.node_ids.front();
        }
        return w;
    };

    for (const auto& f : doc.value("features", json::array())) {
        if (!f.contains("geometry")) continue;
        const json& geom = f["geometry"];
        const std::string type = geom.value("type", "");

        std::vector<OsmWay> produced;
        if (type == "LineString") {
            produced.push_back(coords_to_way(geom["coordinates"], false));
        } else if (type == "Polygon") {
            produced.push_back(coords_to_way(geom["coordinates"][0], true));
        } else if (type == "MultiPolygon") {
            for (const auto& poly : geom["coordinates"])
                produced.push_back(coords_to_way(poly[0], true));
        } else {
            continue;
        }

        for (auto& w : produced) {
            if (f.contains("properties"))
                for (auto it = f["properties"].begin(); it != f["properties"].end(); ++it)
                    w.tags[it.key()] =
                        it.value().is_string() ? it.value().get<std::string>()
                                               : it.value().dump();
            if (w.node_ids.size() >= 2) ways.push_back(std::move(w));
        }
    }
    return ways;
}

std::vector<OsmWay> load_ways(const std::string& path,
                              std::vector<std::string>* warnings) {
    const std::string text = read_file(path);
    const json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError(path + ": not valid JSON");
    if (doc.contains("elements")) return parse_overpass_json(text, warnings);
    if (doc.value("type", "") == "FeatureCollection") return ways_from_geojson(doc);
    throw ParseError(path + ": expected an Overpass response or a GeoJSON "
                            "FeatureCollection");
}

struct TraceCounts {
    std::size_t traces = 0;
    std::size_t vertices = 0;
    std::size_t triangles = 0;
};

TraceCounts count_traces(const FigureDoc& doc) {
    TraceCounts c;
    c.traces = doc.traces.size();
    for (const auto& trace : doc.traces) {
        if (const auto* mesh = std::get_if<MeshTrace>(&trace)) {
            c.vertices += mesh->xs.size();
            c.triangles += mesh->i.size();
        } else if (const auto* line = std::get_if<LineTrace>(&trace)) {
            c.vertices += line->xs.size();
        }
    }
    return c;
}

} // namespace

FigureDoc scene_from_files(const CliOptions& opts,
                           std::vector<std::string>* warnings) {
    DemGrid dem;
    try {
        dem = load_dem(opts.dem_path);
    } catch (const std::exception& e) {
        throw ParseError("dem file " + opts.dem_path + ": " + e.what());
    }

    VectorData vectors;
    auto load_layer = [&](const std::string& path, const char* label,
                          std::vector<OsmWay>& dst) {
        if (path.empty()) return;
        try {
            dst = load_ways(path, warnings);
        } catch (const std::exception& e) {
            throw ParseError(std::string(label) + " file " + path + ": " + e.what());
        }
    };
    load_layer(opts.roads_path, "roads", vectors.roads);
    load_layer(opts.power_path, "power", vectors.power);
    load_layer(opts.buildings_path, "buildings", vectors.buildings);

    std::vector<HeightFeature> heights;
    if (!opts.heights_path.empty()) {
        try {
            heights = parse_height_geojson(read_file(opts.heights_path));
        } catch (const std::exception& e) {
            throw ParseError("heights file " + opts.heights_path + ": " + e.what());
        }
    }

    return build_scene(dem, vectors, heights, opts.pipeline, warnings);
}

int cli_generate(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        std::vector<std::string> warnings;
        const FigureDoc doc = scene_from_files(opts, &warnings);
        const std::string body = serialize_figure(doc);

        std::ofstream of(opts.out_path, std::ios::binary);
        if (!of) {
            err << "cannot write output file " << opts.out_path << "\n";
            return 1;
        }
        of << body;
        of.close();

        for (const auto& w : warnings) err << "warning: " << w << "\n";
        const TraceCounts c = count_traces(doc);
        out << "wrote " << opts.out_path << ": " << c.traces << " traces, "
            << c.vertices << " vertices, " << c.triangles << " triangles\n";
        return 0;
    } catch (const ParseError& e) {
        err << e.what() << "\n"; // input errors already name the file
        return 1;
    } catch (const std::exception& e) {
        err << "scene generation failed: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"3D urban scene models from open geodata"};
    app.require_subcommand(1);

    CliOptions gen_opts;
    CLI::App* gen = app.add_subcommand(
        "generate", "Build a scene figure document from local files");
    gen->add_option("--dem", gen_opts.dem_path,
                    "Elevation raster (.asc or GeoTIFF)")->required();
    gen->add_option("--roads", gen_opts.roads_path,
                    "Road ways (Overpass JSON or GeoJSON)");
    gen->add_option("--power", gen_opts.power_path,
                    "Power line ways (Overpass JSON or GeoJSON)");
    gen->add_option("--buildings", gen_opts.buildings_path,
                    "Building footprint ways (Overpass JSON or GeoJSON)");
    gen->add_option("--heights", gen_opts.heights_path,
                    "Building height polygons (GeoJSON)");
    gen->add_option("--out", gen_opts.out_path, "Output figure JSON path")->required();
    gen->add_option("--spacing", gen_opts.pipeline.spacing,
                    "Drape sample spacing in meters");
    gen->add_option("--road-offset", gen_opts.pipeline.road_offset,
                    "Road height above terrain in meters");
    gen->add_option("--power-offset", gen_opts.pipeline.power_offset,
                    "Power line height above terrain in meters");
    gen->add_option("--default-height", gen_opts.pipeline.default_height,
                    "Building height when no height polygon matches");
    gen->add_option("--resolution", gen_opts.pipeline.resolution,
                    "Terrain resolution in meters (0 = auto)");
    gen->add_option("--title", gen_opts.pipeline.title, "Figure title");

    Config cfg;
    std::string heights_mode = "file";
    std::string config_path;
    CLI::App* serve = app.add_subcommand("serve", "Serve scene figures over HTTP");
    serve->add_option("--config", config_path, "Config file (key=value per line)");
    serve->add_option("--geocoder-url", cfg.geocoder_url, "Geocoder base URL")
        ->envname("GEOSCENE_GEOCODER_URL");
    serve->add_option("--dem-url", cfg.dem_url, "Elevation service base URL")
        ->envname("GEOSCENE_DEM_URL");
    serve->add_option("--overpass-url", cfg.overpass_url, "Overpass base URL")
        ->envname("GEOSCENE_OVERPASS_URL");
    serve->add_option("--heights-mode", heights_mode, "Height provider: file or http")
        ->check(CLI::IsMember({"file", "http"}));
    serve->add_option("--heights-path", cfg.heights_path, "Height GeoJSON file");
    serve->add_option("--heights-url", cfg.heights_url, "Height provider base URL")
        ->envname("GEOSCENE_HEIGHTS_URL");
    serve->add_option("--host", cfg.listen_host, "Listen address")
        ->envname("GEOSCENE_HOST");
    serve->add_option("--port", cfg.listen_port, "Listen port (0 = ephemeral)")
        ->envname("GEOSCENE_PORT");
    serve->add_option("--spacing", cfg.spacing, "Drape sample spacing in meters");
    serve->add_option("--road-offset", cfg.road_offset, "Road z offset in meters");
    serve->add_option("--power-offset", cfg.power_offset, "Power z offset in meters");
    serve->add_option("--default-height", cfg.default_height,
                      "Default building height in meters");
    serve->add_option("--resolution", cfg.resolution,
                      "Terrain resolution in meters (0 = auto)");
    serve->add_option("--cache-ttl", cfg.cache_ttl_s, "Figure cache TTL in seconds");
    serve->add_option("--concurrency", cfg.pipeline_concurrency,
                      "Max concurrent pipeline runs");
    serve->add_option("--pixel-budget", cfg.pixel_budget,
                      "Max projected raster pixels per request");
    serve->add_option("--user-agent", cfg.user_agent, "User-Agent for upstream calls");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (gen->parsed()) return cli_generate(gen_opts, std::cout, std::cerr);

    cfg.heights_mode = heights_mode == "http" ? HeightsMode::Http : HeightsMode::File;
    try {
        if (!config_path.empty()) {
            for (const auto& [key, value] : read_config_file(config_path)) {
                // Flags and environment variables win over the file.
                std::string flag = "--" + key;
                std::replace(flag.begin(), flag.end(), '_', '-');
                const CLI::Option* opt = serve->get_option_no_throw(flag);
                if (opt != nullptr && opt->count() > 0) continue;
                apply_config_entry(cfg, key, value);
            }
        }
        Service svc(cfg);
        if (cfg.listen_port == 0) {
            const int port = svc.bind_any();
            if (port <= 0) {
                std::cerr << "failed to bind " << cfg.listen_host << "\n";
                return 1;
            }
            std::cout << "serving on http://" << cfg.listen_host << ":" << port
                      << std::endl;
            return svc.listen_after_bind() ? 0 : 1;
        }
        std::cout << "serving on http://" << cfg.listen_host << ":" << cfg.listen_port
                  << std::endl;
        return svc.listen() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

} // namespace geoscene
