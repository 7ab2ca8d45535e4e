#include "geoscene/raster.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <system_error>

#include "geoscene/errors.hpp"

namespace geoscene {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool parse_double(std::string_view tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) toks.push_back(line.substr(start, i - start));
    }
    return toks;
}

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

bool DemGrid::is_nodata_value(double v) const {
    if (!std::isfinite(v)) return true;
    return has_nodata && v == nodata;
}

DemGrid parse_ascii_grid(std::string_view text) {
    // Split into lines, tracking 1-based numbers for diagnostics.
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
        if (nl == text.size()) break;
    }

    int ncols = -1, nrows = -1;
    double xll = 0.0, yll = 0.0, cellsize = 0.0, nodata = -9999.0;
    bool x_is_center = false, y_is_center = false;
    bool have_x = false, have_y = false, have_cell = false;

    std::size_t li = 0;
    for (; li < lines.size(); ++li) {
        auto toks = split_ws(lines[li]);
        if (toks.empty()) continue;
        const std::string key = lower(std::string(toks[0]));
        const bool is_header =
            key == "ncols" || key == "nrows" || key == "xllcorner" || key == "xllcenter" ||
            key == "yllcorner" || key == "yllcenter" || key == "cellsize" ||
            key == "nodata_value";
        if (!is_header) break;
        if (toks.size() != 2)
            throw ParseError("ascii grid line " + std::to_string(li + 1) +
                             ": header '" + key + "' needs one value");
        double v = 0.0;
        if (!parse_double(toks[1], v))
            throw ParseError("ascii grid line " + std::to_string(li + 1) +
                             ": non-numeric header value '" + std::string(toks[1]) + "'");
        if (key == "ncols") ncols = static_cast<int>(v);
        else if (key == "nrows") nrows = static_cast<int>(v);
        else if (key == "xllcorner") { xll = v; have_x = true; }
        else if (key == "xllcenter") { xll = v; have_x = true; x_is_center = true; }
        else if (key == "yllcorner") { yll = v; have_y = true; }
        else if (key == "yllcenter") { yll = v; have_y = true; y_is_center = true; }
        else if (key == "cellsize") { cellsize = v; have_cell = true; }
        else nodata = v;
    }

    if (ncols <= 0) throw ParseError("ascii grid: missing or invalid ncols header");
    if (nrows <= 0) throw ParseError("ascii grid: missing or invalid nrows header");
    if (!have_x) throw ParseError("ascii grid: missing xllcorner/xllcenter header");
    if (!have_y) throw ParseError("ascii grid: missing yllcorner/yllcenter header");
    if (!have_cell || cellsize <= 0.0)
        throw ParseError("ascii grid: missing or non-positive cellsize header");

    if (x_is_center) xll -= cellsize / 2.0;
    if (y_is_center) yll -= cellsize / 2.0;

    DemGrid g;
    g.crs = Crs::Geographic;
    g.pixel_w = cellsize;
    g.pixel_h = cellsize;
    g.width = ncols;
    g.height = nrows;
    g.origin_x = xll;
    g.origin_y = yll + nrows * cellsize;
    g.nodata = nodata;
    g.has_nodata = true;
    g.values.reserve(static_cast<std::size_t>(ncols) * nrows);

    int row = 0;
    for (; li < lines.size(); ++li) {
        auto toks = split_ws(lines[li]);
        if (toks.empty()) continue;
        if (row >= nrows)
            throw ParseError("ascii grid line " + std::to_string(li + 1) +
                             ": more data rows than nrows=" + std::to_string(nrows));
        if (static_cast<int>(toks.size()) != ncols)
            throw ParseError("ascii grid line " + std::to_string(li + 1) + ": row has " +
                             std::to_string(toks.size()) + " cells, expected " +
                             std::to_string(ncols));
        for (auto tok : toks) {
            double v = 0.0;
            if (!parse_double(tok, v))
                throw ParseError("ascii grid line " + std::to_string(li + 1) +
                                 ": non-numeric cell '" + std::string(tok) + "'");
            g.values.push_back(v);
        }
        ++row;
    }
    if (row != nrows)
        throw ParseError("ascii grid: got " + std::to_string(row) + " data rows, expected " +
                         std::to_string(nrows));
    return g;
}

std::string write_ascii_grid(const DemGrid& g) {
    if (g.pixel_w != g.pixel_h)
        throw DomainError("write_ascii_grid: format requires square pixels");
    if (g.width <= 0 || g.height <= 0)
        throw DomainError("write_ascii_grid: empty grid");

    std::ostringstream out;
    out << "ncols " << g.width << "\n";
    out << "nrows " << g.height << "\n";
    out << "xllcorner " << format_double(g.origin_x) << "\n";
    out << "yllcorner " << format_double(g.origin_y - g.height * g.pixel_h) << "\n";
    out << "cellsize " << format_double(g.pixel_w) << "\n";
    if (g.has_nodata) out << "NODATA_value " << format_double(g.nodata) << "\n";
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            if (c) out << ' ';
            out << format_double(g.value(r, c));
        }
        out << '\n';
    }
    return out.str();
}

std::optional<double> sample_bilinear(const DemGrid& g, double x, double y) {
    if (g.width <= 0 || g.height <= 0) return std::nullopt;
    // Fractional position on the pixel-center lattice.
    const double fc = (x - g.origin_x) / g.pixel_w - 0.5;
    const double fr = (g.origin_y - y) / g.pixel_h - 0.5;
    if (fc < 0.0 || fc > g.width - 1 || fr < 0.0 || fr > g.height - 1) return std::nullopt;

    const int c0 = static_cast<int>(std::floor(fc));
    const int r0 = static_cast<int>(std::floor(fr));
    const double dx = fc - c0;
    const double dy = fr - r0;

    const double w[4] = {(1 - dx) * (1 - dy), dx * (1 - dy), (1 - dx) * dy, dx * dy};
    const int rc[4][2] = {{r0, c0}, {r0, c0 + 1}, {r0 + 1, c0}, {r0 + 1, c0 + 1}};

    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (w[i] == 0.0) continue; // zero-weight corner may lie off-grid
        const int r = rc[i][0], c = rc[i][1];
        if (r < 0 || r >= g.height || c < 0 || c >= g.width) return std::nullopt;
        const double v = g.value(r, c);
        if (g.is_nodata_value(v)) return std::nullopt;
        acc += w[i] * v;
    }
    return acc;
}

double auto_mercator_resolution(const DemGrid& src) {
    const double angular = 0.5 * (src.pixel_w + src.pixel_h);
    const double center_lat = 0.5 * (src.south() + src.north());
    const double meters_per_degree = kEarthRadius * std::numbers::pi / 180.0;
    return angular * meters_per_degree / std::cos(center_lat * std::numbers::pi / 180.0);
}

ReprojectPlan plan_reprojection(const DemGrid& src, double target_res) {
    if (src.crs != Crs::Geographic)
        throw DomainError("reproject_to_mercator: source grid must be EPSG:4326");
    if (src.width <= 0 || src.height <= 0)
        throw EmptyInputError("reproject_to_mercator: empty source raster");

    ReprojectPlan plan;
    plan.bbox = mercator_forward(
        BBoxGeo{src.west(), src.south(), src.east(), src.north()});
    plan.resolution = target_res > 0.0 ? target_res : auto_mercator_resolution(src);
    const double span_x = plan.bbox.east - plan.bbox.west;
    const double span_y = plan.bbox.north - plan.bbox.south;
    if (span_x <= 0.0 || span_y <= 0.0)
        throw EmptyInputError("reproject_to_mercator: source bbox projects to an empty area");
    plan.width = static_cast<int>(std::ceil(span_x / plan.resolution));
    plan.height = static_cast<int>(std::ceil(span_y / plan.resolution));
    return plan;
}

DemGrid reproject_to_mercator(const DemGrid& src, double target_res) {
    const ReprojectPlan plan = plan_reprojection(src, target_res);

    DemGrid out;
    out.crs = Crs::Mercator;
    out.origin_x = plan.bbox.west;
    out.origin_y = plan.bbox.north;
    out.pixel_w = plan.resolution;
    out.pixel_h = plan.resolution;
    out.width = plan.width;
    out.height = plan.height;
    out.nodata = src.has_nodata ? src.nodata : -9999.0;
    out.has_nodata = true;
    out.values.resize(plan.pixel_count());

    for (int r = 0; r < out.height; ++r) {
        const double y = out.center_y(r);
        for (int c = 0; c < out.width; ++c) {
            const double x = out.center_x(c);
            const GeoPoint ll = mercator_inverse(MercatorPoint{x, y});
            const auto v = sample_bilinear(src, ll.lon, ll.lat);
            out.values[static_cast<std::size_t>(r) * out.width + c] =
                v ? *v : out.nodata;
        }
    }
    return out;
}

} // namespace geoscene
