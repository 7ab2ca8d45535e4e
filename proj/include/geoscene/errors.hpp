#pragma once

#include <stdexcept>
#include <string>

namespace geoscene {

/// Input outside the mathematical domain of an operation (latitude band,
/// Mercator bounds, non-positive parameters).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate or self-intersecting geometry.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data (ASCII grid, TIFF stream, JSON payload).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input uses a feature outside the declared format subset; the message
/// names the feature.
class UnsupportedFeatureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation received or produced an empty raster/mesh/scene.
class EmptyInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A building footprint has no valid elevation sample under any vertex.
class NoElevationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Figure serialization failed; the message names the offending trace.
class SerializationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Client-supplied request parameters are unusable.
class BadRequestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The geocoder returned zero results for the requested place.
class PlaceNotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The DEM provider rejected the API key.
class InvalidKeyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An upstream service failed; carries the upstream HTTP status
/// (0 when the connection itself failed).
class UpstreamError : public std::runtime_error {
public:
    UpstreamError(int status, const std::string& what)
        : std::runtime_error(what), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

/// The requested area would exceed the configured raster pixel budget.
class PixelBudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid service configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace geoscene
