#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace geoscene {

enum class HeightsMode { File, Http };

struct Config {
    // Upstream base URLs.
    std::string geocoder_url = "https://nominatim.openstreetmap.org";
    std::string dem_url = "https://portal.opentopography.org";
    std::string overpass_url = "https://overpass-api.de";

    // Building-height provider.
    HeightsMode heights_mode = HeightsMode::File;
    std::string heights_path;
    std::string heights_url;

    // Pipeline defaults.
    double spacing = 10.0;
    double road_offset = 1.0;
    double power_offset = 2.0;
    double default_height = 8.0;
    double resolution = 0.0; // meters; <= 0 selects auto

    // Service behavior.
    double cache_ttl_s = 86400.0;
    int pipeline_concurrency = 2;
    std::uint64_t pixel_budget = 4'000'000;

    // Upstream client behavior.
    double geocoder_min_interval_s = 1.0;
    double dem_min_interval_s = 0.0;      // serialized per host, no extra spacing
    double overpass_min_interval_s = 0.0;
    int max_retries = 2;
    double retry_backoff_s = 0.25;
    double point_fallback_half_width_m = 1000.0;
    std::string user_agent = "geoscene/0.1 (urban 3D scene service)";

    // Listen address.
    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
};

/// Throws ConfigError when a numeric default is non-positive where the
/// contract requires it, or the heights mode lacks its path/URL.
void validate_config(const Config& cfg);

/// Reads a key=value config file in order. Blank lines and #-comments are
/// skipped; a line without '=' or with an empty key is a ConfigError, as is
/// an unreadable file.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Sets one Config field from its config-file key (the serve flag name with
/// underscores, e.g. road_offset). Unknown keys and unparseable values throw
/// ConfigError.
void apply_config_entry(Config& cfg, const std::string& key, const std::string& value);

} // namespace geoscene
