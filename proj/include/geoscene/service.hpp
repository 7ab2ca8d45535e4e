#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "geoscene/config.hpp"
#include "geoscene/net.hpp"
#include "geoscene/pipeline.hpp"
#include "geoscene/sources.hpp"

namespace httplib {
class Server;
}

namespace geoscene {

/// Map a URL place slug to geocoder query text: percent-decode, then turn
/// hyphens into ", ", then trim. Throws BadRequestError when the result is
/// empty.
std::string parse_place_slug(const std::string& slug);

/// TTL cache of serialized figure documents; concurrent readers, exclusive
/// writers. Expired entries are never served.
class FigureCache {
public:
    explicit FigureCache(double ttl_s) : ttl_(ttl_s) {}

    std::shared_ptr<const std::string> get(const std::string& key);
    void put(const std::string& key, std::string body);

private:
    std::chrono::duration<double> ttl_;
    struct Entry {
        std::shared_ptr<const std::string> body;
        std::chrono::steady_clock::time_point created;
    };
    std::shared_mutex mutex_;
    std::unordered_map<std::string, Entry> entries_;
};

/// HTTP front end: GET /{api_key}/{place_slug} returns the figure document,
/// GET /healthz returns 200. Runs the full pipeline against the configured
/// upstreams with caching and a bounded number of concurrent executions.
class Service {
public:
    explicit Service(Config cfg);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Bind to an ephemeral port on cfg.listen_host; returns the port.
    int bind_any();
    /// Blocking accept loop after bind_any().
    bool listen_after_bind();
    /// Bind cfg.listen_host:cfg.listen_port and serve; blocking.
    bool listen();
    void stop();
    bool wait_until_ready(double timeout_s = 5.0);

    /// Pipeline entry shared by the HTTP handler and tests: returns the
    /// response body and sets the HTTP status.
    std::string handle_place(const std::string& api_key,
                             const std::string& slug, int& status);

    const Config& config() const { return cfg_; }

private:
    std::string run_pipeline(const std::string& api_key,
                             const std::string& query);

    Config cfg_;
    std::unique_ptr<httplib::Server> server_;
    FigureCache cache_;

    // Upstream clients persist across requests so per-host rate limits hold.
    std::unique_ptr<UpstreamClient> geocoder_;
    std::unique_ptr<UpstreamClient> dem_;
    std::unique_ptr<UpstreamClient> overpass_;
    std::unique_ptr<HeightProvider> heights_;

    std::mutex gate_mutex_;
    std::condition_variable gate_cv_;
    int running_ = 0;
};

} // namespace geoscene
