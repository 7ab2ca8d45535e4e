#include "geoscene/config.hpp"

#include <cstddef>
#include <fstream>
#include <stdexcept>

#include "geoscene/errors.hpp"

namespace geoscene {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + ": '" + value + "' is not a number");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + ": '" + value + "' is not an integer");
    }
}

} // namespace

void validate_config(const Config& cfg) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw ConfigError(std::string("config: ") + name + " must be positive");
    };
    auto non_negative = [](double v, const char* name) {
        if (v < 0.0)
            throw ConfigError(std::string("config: ") + name + " must not be negative");
    };

    if (cfg.geocoder_url.empty()) throw ConfigError("config: geocoder_url is empty");
    if (cfg.dem_url.empty()) throw ConfigError("config: dem_url is empty");
    if (cfg.overpass_url.empty()) throw ConfigError("config: overpass_url is empty");

    if (cfg.heights_mode == HeightsMode::File && cfg.heights_path.empty())
        throw ConfigError("config: heights_mode is file but heights_path is empty");
    if (cfg.heights_mode == HeightsMode::Http && cfg.heights_url.empty())
        throw ConfigError("config: heights_mode is http but heights_url is empty");

    positive(cfg.spacing, "spacing");
    positive(cfg.default_height, "default_height");
    positive(cfg.cache_ttl_s, "cache_ttl_s");
    positive(cfg.point_fallback_half_width_m, "point_fallback_half_width_m");
    non_negative(cfg.geocoder_min_interval_s, "geocoder_min_interval_s");
    non_negative(cfg.dem_min_interval_s, "dem_min_interval_s");
    non_negative(cfg.overpass_min_interval_s, "overpass_min_interval_s");
    non_negative(cfg.retry_backoff_s, "retry_backoff_s");

    if (cfg.pipeline_concurrency < 1)
        throw ConfigError("config: pipeline_concurrency must be at least 1");
    if (cfg.max_retries < 0)
        throw ConfigError("config: max_retries must not be negative");
    if (cfg.pixel_budget == 0)
        throw ConfigError("config: pixel_budget must be positive");
    if (cfg.user_agent.empty())
        throw ConfigError("config: user_agent is empty");
    if (cfg.listen_port < 0 || cfg.listen_port > 65535)
        throw ConfigError("config: listen_port out of range");
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file " + path + ": cannot open");

    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file " + path + ":" + std::to_string(lineno) +
                              ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty())
            throw ConfigError("config file " + path + ":" + std::to_string(lineno) +
                              ": empty key");
        entries.emplace_back(key, trim(stripped.substr(eq + 1)));
    }
    return entries;
}

void apply_config_entry(Config& cfg, const std::string& key, const std::string& value) {
    if (key == "geocoder_url") cfg.geocoder_url = value;
    else if (key == "dem_url") cfg.dem_url = value;
    else if (key == "overpass_url") cfg.overpass_url = value;
    else if (key == "heights_mode") {
        if (value == "file") cfg.heights_mode = HeightsMode::File;
        else if (value == "http") cfg.heights_mode = HeightsMode::Http;
        else throw ConfigError("config: heights_mode must be file or http, got '" + value + "'");
    }
    else if (key == "heights_path") cfg.heights_path = value;
    else if (key == "heights_url") cfg.heights_url = value;
    else if (key == "host") cfg.listen_host = value;
    else if (key == "port") cfg.listen_port = parse_int(key, value);
    else if (key == "spacing") cfg.spacing = parse_number(key, value);
    else if (key == "road_offset") cfg.road_offset = parse_number(key, value);
    else if (key == "power_offset") cfg.power_offset = parse_number(key, value);
    else if (key == "default_height") cfg.default_height = parse_number(key, value);
    else if (key == "resolution") cfg.resolution = parse_number(key, value);
    else if (key == "cache_ttl") cfg.cache_ttl_s = parse_number(key, value);
    else if (key == "concurrency") cfg.pipeline_concurrency = parse_int(key, value);
    else if (key == "pixel_budget") {
        const int v = parse_int(key, value);
        if (v < 0) throw ConfigError("config: pixel_budget must not be negative");
        cfg.pixel_budget = static_cast<std::uint64_t>(v);
    }
    else if (key == "user_agent") cfg.user_agent = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

} // namespace geoscene
