#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "geoscene/cli.hpp"
#include "geoscene/errors.hpp"
#include "geoscene/geomath.hpp"
#include "geoscene/scene.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_geoscene, m) {
    m.doc() = "3D urban scene figure documents from open geodata";
    m.attr("__version__") = "0.1.0";

    py::register_exception<geoscene::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<geoscene::ParseError>(m, "ParseError", PyExc_ValueError);

    m.def(
        "mercator_forward",
        [](double lon, double lat) {
            const geoscene::MercatorPoint p =
                geoscene::mercator_forward(geoscene::GeoPoint{lon, lat});
            return py::make_tuple(p.x, p.y);
        },
        py::arg("lon"), py::arg("lat"),
        "Project WGS84 degrees to Web Mercator (EPSG:3857) meters.");

    m.def(
        "mercator_inverse",
        [](double x, double y) {
            const geoscene::GeoPoint p =
                geoscene::mercator_inverse(geoscene::MercatorPoint{x, y});
            return py::make_tuple(p.lon, p.lat);
        },
        py::arg("x"), py::arg("y"),
        "Invert Web Mercator meters back to WGS84 degrees.");

    m.def(
        "generate",
        [](const std::string& dem, const std::string& roads, const std::string& power,
           const std::string& buildings, const std::string& heights, double spacing,
           double road_offset, double power_offset, double default_height,
           double resolution, const std::string& title) {
            geoscene::CliOptions opts;
            opts.dem_path = dem;
            opts.roads_path = roads;
            opts.power_path = power;
            opts.buildings_path = buildings;
            opts.heights_path = heights;
            opts.pipeline.spacing = spacing;
            opts.pipeline.road_offset = road_offset;
            opts.pipeline.power_offset = power_offset;
            opts.pipeline.default_height = default_height;
            opts.pipeline.resolution = resolution;
            opts.pipeline.title = title;

            std::vector<std::string> warnings;
            std::string body;
            {
                // File IO and meshing do not touch the interpreter.
                py::gil_scoped_release release;
                const geoscene::FigureDoc doc =
                    geoscene::scene_from_files(opts, &warnings);
                body = geoscene::serialize_figure(doc);
            }
            return py::make_tuple(std::move(body), std::move(warnings));
        },
        py::arg("dem"), py::arg("roads") = "", py::arg("power") = "",
        py::arg("buildings") = "", py::arg("heights") = "", py::arg("spacing") = 10.0,
        py::arg("road_offset") = 1.0, py::arg("power_offset") = 2.0,
        py::arg("default_height") = 8.0, py::arg("resolution") = 0.0,
        py::arg("title") = "",
        "Build a figure document from local files; returns (json_str, warnings).");
}
