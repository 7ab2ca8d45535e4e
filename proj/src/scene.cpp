#include "geoscene/scene.hpp"

#include <cmath>

#include <json.hpp>

#include "geoscene/errors.hpp"

namespace geoscene {

namespace {

using nlohmann::json;

void append_path(LineTrace& t, const Path3D& path) {
    for (const auto& seg : path.segments) {
        if (!t.xs.empty()) {
            // null break between segments, aligned across all three arrays
            t.xs.push_back(std::nullopt);
            t.ys.push_back(std::nullopt);
            t.zs.push_back(std::nullopt);
        }
        for (const Vec3& p : seg) {
            t.xs.push_back(p.x);
            t.ys.push_back(p.y);
            t.zs.push_back(p.z);
        }
    }
}

json coord_array(const std::string& trace_name,
                 const std::vector<std::optional<double>>& vs) {
    json arr = json::array();
    for (const auto& v : vs) {
        if (!v) {
            arr.push_back(nullptr);
            continue;
        }
        if (!std::isfinite(*v))
            throw SerializationError("figure: non-finite coordinate in trace '" +
                                     trace_name + "'");
        arr.push_back(*v);
    }
    return arr;
}

json coord_array(const std::string& trace_name, const std::vector<double>& vs) {
    json arr = json::array();
    for (double v : vs) {
        if (!std::isfinite(v))
            throw SerializationError("figure: non-finite coordinate in trace '" +
                                     trace_name + "'");
        arr.push_back(v);
    }
    return arr;
}

json trace_json(const MeshTrace& t) {
    json j;
    j["type"] = "mesh3d";
    j["name"] = t.name;
    j["color"] = t.color;
    j["x"] = coord_array(t.name, t.xs);
    j["y"] = coord_array(t.name, t.ys);
    j["z"] = coord_array(t.name, t.zs);
    j["i"] = t.i;
    j["j"] = t.j;
    j["k"] = t.k;
    return j;
}

json trace_json(const LineTrace& t) {
    json j;
    j["type"] = "scatter3d";
    j["mode"] = "lines";
    j["name"] = t.name;
    j["line"] = {{"color", t.color}, {"width", t.width}};
    j["x"] = coord_array(t.name, t.xs);
    j["y"] = coord_array(t.name, t.ys);
    j["z"] = coord_array(t.name, t.zs);
    return j;
}

MeshTrace mesh_trace(const TriMesh& m, std::string name, std::string color) {
    MeshTrace t;
    t.name = std::move(name);
    t.color = std::move(color);
    t.xs = m.xs;
    t.ys = m.ys;
    t.zs = m.zs;
    t.i.reserve(m.tris.size());
    t.j.reserve(m.tris.size());
    t.k.reserve(m.tris.size());
    for (const auto& tri : m.tris) {
        t.i.push_back(tri[0]);
        t.j.push_back(tri[1]);
        t.k.push_back(tri[2]);
    }
    return t;
}

} // namespace

FigureDoc assemble_figure(const TriMesh& terrain, const Path3D& roads,
                          const Path3D& power,
                          const std::vector<TriMesh>& buildings,
                          const SceneStyle& style) {
    if (terrain.vertex_count() == 0)
        throw EmptyInputError("figure: terrain mesh has no vertices");

    FigureDoc doc;
    doc.layout.title = style.title;
    doc.traces.push_back(mesh_trace(terrain, "terrain", style.terrain_color));

    if (!roads.segments.empty()) {
        LineTrace t;
        t.name = "roads";
        t.color = style.road_color;
        t.width = style.road_width;
        append_path(t, roads);
        doc.traces.push_back(std::move(t));
    }
    if (!power.segments.empty()) {
        LineTrace t;
        t.name = "power lines";
        t.color = style.power_color;
        t.width = style.power_width;
        append_path(t, power);
        doc.traces.push_back(std::move(t));
    }
    for (std::size_t n = 0; n < buildings.size(); ++n)
        doc.traces.push_back(mesh_trace(buildings[n],
                                        "building " + std::to_string(n + 1),
                                        style.building_color));
    return doc;
}

std::string serialize_figure(const FigureDoc& f) {
    json data = json::array();
    for (const auto& trace : f.traces)
        data.push_back(std::visit([](const auto& t) { return trace_json(t); }, trace));

    json axis = {{"visible", f.layout.axes_visible}};
    json doc;
    doc["data"] = std::move(data);
    doc["layout"] = {
        {"scene",
         {{"aspectmode", f.layout.aspect_mode},
          {"xaxis", axis},
          {"yaxis", axis},
          {"zaxis", axis}}},
        {"title", f.layout.title},
    };
    // nlohmann objects iterate sorted by key and dump() uses shortest
    // round-trip number form, so output is deterministic and reparse-stable.
    return doc.dump();
}

} // namespace geoscene
