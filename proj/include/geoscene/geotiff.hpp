#pragma once

#include <cstdint>
#include <span>

#include "geoscene/raster.hpp"

namespace geoscene {

/// Parse a single-band classic TIFF (either byte order) into a geographic
/// DemGrid. Supported subset: int16/uint16/float32 samples, compression
/// none or Deflate, strip or tile layout, georeferencing via
/// ModelPixelScale + ModelTiepoint, nodata via the GDAL_NODATA ASCII tag.
/// Anything else raises UnsupportedFeatureError naming the feature;
/// truncated or malformed streams raise ParseError.
DemGrid parse_geotiff(std::span<const std::uint8_t> bytes);

} // namespace geoscene
