#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geoscene/drape.hpp"
#include "geoscene/terrain.hpp"

namespace geoscene {

/// A mesh3d trace: parallel vertex arrays plus per-corner index arrays.
struct MeshTrace {
    std::string name;
    std::string color;
    std::vector<double> xs, ys, zs;
    std::vector<std::uint32_t> i, j, k;
};

/// A scatter3d line trace; nullopt entries are break markers serialized as
/// JSON null, aligned across all three arrays.
struct LineTrace {
    std::string name;
    std::string color;
    double width = 2.0;
    std::vector<std::optional<double>> xs, ys, zs;
};

using Trace = std::variant<MeshTrace, LineTrace>;

struct FigureLayout {
    std::string title;
    std::string aspect_mode = "data"; // preserve data proportions
    bool axes_visible = false;
};

struct FigureDoc {
    std::vector<Trace> traces;
    FigureLayout layout;
};

struct SceneStyle {
    std::string terrain_color = "#8a7f6d";
    std::string road_color = "#ffffff";
    std::string power_color = "#ff0000";
    std::string building_color = "#add8e6";
    double road_width = 2.0;
    double power_width = 2.0;
    std::string title;
};

/// Trace order: terrain mesh, road line, power line, one mesh per building.
/// Empty road/power paths produce no trace. Throws EmptyInputError when the
/// terrain mesh is empty.
FigureDoc assemble_figure(const TriMesh& terrain, const Path3D& roads,
                          const Path3D& power,
                          const std::vector<TriMesh>& buildings,
                          const SceneStyle& style = {});

/// Serialize to the figure-document JSON: {"data":[...],"layout":{...}}
/// with mesh3d / scatter3d traces, deterministic key order, and full
/// round-trip number precision. Throws SerializationError naming the trace
/// when a coordinate is non-finite.
std::string serialize_figure(const FigureDoc& f);

} // namespace geoscene
