#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoscene/geomath.hpp"

namespace geoscene {

/// Georeferenced single-band elevation raster. origin_x/origin_y locate the
/// OUTER top-left corner of pixel (0,0); rows advance southward. The center
/// of pixel (row, col) is (origin_x + (col+0.5)*pixel_w,
/// origin_y - (row+0.5)*pixel_h).
struct DemGrid {
    Crs crs = Crs::Geographic;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double pixel_w = 0.0; // positive, grid CRS units
    double pixel_h = 0.0; // positive, grid CRS units
    int width = 0;
    int height = 0;
    double nodata = -9999.0;
    bool has_nodata = false;
    std::vector<double> values; // row-major, meters

    double value(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    bool is_nodata_value(double v) const;
    bool valid_at(int row, int col) const {
        return !is_nodata_value(value(row, col));
    }
    double center_x(int col) const { return origin_x + (col + 0.5) * pixel_w; }
    double center_y(int row) const { return origin_y - (row + 0.5) * pixel_h; }

    // Outer bounds.
    double west() const { return origin_x; }
    double north() const { return origin_y; }
    double east() const { return origin_x + width * pixel_w; }
    double south() const { return origin_y - height * pixel_h; }
};

/// Parse an ESRI ASCII grid (.asc). Header keys ncols, nrows,
/// xllcorner/xllcenter, yllcorner/yllcenter, cellsize and optional
/// NODATA_value, followed by nrows data rows north to south.
/// Nodata defaults to -9999 when the header is absent.
/// Throws ParseError naming the offending line.
DemGrid parse_ascii_grid(std::string_view text);

/// Inverse of parse_ascii_grid for square-pixel grids; cell values
/// round-trip exactly.
std::string write_ascii_grid(const DemGrid& g);

/// Bilinear blend of the four pixel centers surrounding (x, y) in grid CRS
/// units. Returns nullopt outside the pixel-center hull or when any pixel
/// with nonzero weight is nodata.
std::optional<double> sample_bilinear(const DemGrid& g, double x, double y);

/// Target geometry of a 4326 -> 3857 reprojection, computed up front so the
/// output size can be checked before any resampling work.
struct ReprojectPlan {
    BBoxMerc bbox;
    double resolution = 0.0; // meters per pixel, both axes
    int width = 0;
    int height = 0;
    std::uint64_t pixel_count() const {
        return static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
    }
};

/// Source pixel angular size converted to Mercator meters at the grid's
/// center latitude (projection stretches ground distance by 1/cos(lat)).
double auto_mercator_resolution(const DemGrid& src);

/// target_res <= 0 selects auto_mercator_resolution.
ReprojectPlan plan_reprojection(const DemGrid& src, double target_res = 0.0);

/// Resample a geographic grid onto a square-pixel Mercator grid covering the
/// forward-projected source bbox. Each output pixel center is
/// inverse-projected and filled by bilinear interpolation over source pixel
/// centers; nodata propagates strictly.
DemGrid reproject_to_mercator(const DemGrid& src, double target_res = 0.0);

} // namespace geoscene
