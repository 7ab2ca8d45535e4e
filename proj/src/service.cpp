#include "geoscene/service.hpp"

#include <charconv>
#include <chrono>
#include <cstdint>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "geoscene/errors.hpp"
#include "geoscene/geotiff.hpp"

namespace geoscene {

namespace {

std::string json_error(const std::string& msg) {
    return nlohmann::json{{"error", msg}}.dump();
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Limits the number of pipelines in flight; excess requests queue here.
class GateSlot {
public:
    GateSlot(std::mutex& m, std::condition_variable& cv, int& running, int limit)
        : mutex_(m), cv_(cv), running_(running) {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return running_ < limit; });
        ++running_;
    }
    ~GateSlot() {
        {
            std::lock_guard lock(mutex_);
            --running_;
        }
        cv_.notify_one();
    }

private:
    std::mutex& mutex_;
    std::condition_variable& cv_;
    int& running_;
};

} // namespace

std::string parse_place_slug(const std::string& slug) {
    std::string decoded = percent_decode(slug);
    std::string query;
    for (char c : decoded) {
        if (c == '-') query += ", ";
        else query += c;
    }
    const auto first = query.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw BadRequestError("place slug is empty after decoding");
    const auto last = query.find_last_not_of(" \t\r\n");
    return query.substr(first, last - first + 1);
}

std::shared_ptr<const std::string> FigureCache::get(const std::string& key) {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    if (std::chrono::steady_clock::now() - it->second.created > ttl_) return nullptr;
    return it->second.body;
}

void FigureCache::put(const std::string& key, std::string body) {
    std::unique_lock lock(mutex_);
    entries_[key] = Entry{std::make_shared<const std::string>(std::move(body)),
                          std::chrono::steady_clock::now()};
}

Service::Service(Config cfg) : cfg_(std::move(cfg)), cache_(cfg_.cache_ttl_s) {
    validate_config(cfg_);

    HttpOptions base;
    base.max_retries = cfg_.max_retries;
    base.backoff_s = cfg_.retry_backoff_s;
    base.user_agent = cfg_.user_agent;

    HttpOptions geo = base;
    geo.min_interval_s = cfg_.geocoder_min_interval_s;
    geocoder_ = std::make_unique<UpstreamClient>(cfg_.geocoder_url, geo);

    HttpOptions dem = base;
    dem.min_interval_s = cfg_.dem_min_interval_s;
    dem_ = std::make_unique<UpstreamClient>(cfg_.dem_url, dem);

    HttpOptions ovp = base;
    ovp.min_interval_s = cfg_.overpass_min_interval_s;
    overpass_ = std::make_unique<UpstreamClient>(cfg_.overpass_url, ovp);

    if (cfg_.heights_mode == HeightsMode::File)
        heights_ = std::make_unique<FileHeightProvider>(cfg_.heights_path);
    else
        heights_ = std::make_unique<HttpHeightProvider>(cfg_.heights_url, base);

    server_ = std::make_unique<httplib::Server>();
    server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });
    server_->Get(R"(/([^/]+)/([^/]+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     int status = 500;
                     const std::string body =
                         handle_place(req.matches[1].str(), req.matches[2].str(), status);
                     res.status = status;
                     res.set_content(body, "application/json");
                 });
    // Anything else (wrong segment count, wrong method) is a bad request.
    server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return; // a route already produced a body
        res.status = 400;
        res.set_content(json_error("expected GET /{api_key}/{place_slug}"),
                        "application/json");
    });
}

Service::~Service() {
    stop();
}

int Service::bind_any() {
    return server_->bind_to_any_port(cfg_.listen_host);
}

bool Service::listen_after_bind() {
    return server_->listen_after_bind();
}

bool Service::listen() {
    return server_->listen(cfg_.listen_host, cfg_.listen_port);
}

void Service::stop() {
    if (server_) server_->stop();
}

bool Service::wait_until_ready(double timeout_s) {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(timeout_s);
    while (std::chrono::steady_clock::now() < deadline) {
        if (server_->is_running()) return true;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return server_->is_running();
}

std::string Service::handle_place(const std::string& api_key,
                                  const std::string& slug, int& status) {
    try {
        if (api_key.empty()) throw BadRequestError("missing API key path segment");
        const std::string query = parse_place_slug(slug);

        // One cache entry per place + pipeline options; the key is a
        // pass-through credential and must not fragment the cache.
        const std::string cache_key =
            query + "\x1f" + format_double(cfg_.spacing) + "," +
            format_double(cfg_.road_offset) + "," + format_double(cfg_.power_offset) +
            "," + format_double(cfg_.default_height) + "," +
            format_double(cfg_.resolution);

        if (auto hit = cache_.get(cache_key)) {
            status = 200;
            return *hit;
        }

        std::string body;
        {
            GateSlot slot(gate_mutex_, gate_cv_, running_, cfg_.pipeline_concurrency);
            body = run_pipeline(api_key, query);
        }
        cache_.put(cache_key, body);
        status = 200;
        return body;
    } catch (const BadRequestError& e) {
        status = 400;
        return json_error(e.what());
    } catch (const InvalidKeyError& e) {
        status = 401;
        return json_error(e.what());
    } catch (const PlaceNotFoundError& e) {
        status = 404;
        return json_error(e.what());
    } catch (const PixelBudgetError& e) {
        status = 422;
        return json_error(e.what());
    } catch (const UpstreamError& e) {
        status = 502;
        return json_error(e.what());
    } catch (const ParseError& e) {
        status = 502;
        return json_error(e.what());
    } catch (const UnsupportedFeatureError& e) {
        status = 502;
        return json_error(e.what());
    } catch (const std::exception& e) {
        status = 500;
        return json_error(e.what());
    }
}

std::string Service::run_pipeline(const std::string& api_key,
                                  const std::string& query) {
    const GeocodedArea area =
        geocode_place(*geocoder_, query, cfg_.point_fallback_half_width_m);

    const std::string tiff = fetch_dem(*dem_, area.bbox, api_key);
    const DemGrid dem = parse_geotiff(
        std::span(reinterpret_cast<const std::uint8_t*>(tiff.data()), tiff.size()));

    const ReprojectPlan plan = plan_reprojection(dem, cfg_.resolution);
    if (plan.pixel_count() > cfg_.pixel_budget)
        throw PixelBudgetError("projected raster would be " +
                               std::to_string(plan.pixel_count()) +
                               " pixels; budget is " + std::to_string(cfg_.pixel_budget));

    VectorData vectors;
    vectors.roads = fetch_osm_layer(*overpass_, area.bbox, OsmLayer::Road);
    vectors.power = fetch_osm_layer(*overpass_, area.bbox, OsmLayer::Power);
    vectors.buildings = fetch_osm_layer(*overpass_, area.bbox, OsmLayer::Building);

    const std::vector<HeightFeature> heights = heights_->load(area.bbox);

    PipelineOptions opts;
    opts.spacing = cfg_.spacing;
    opts.road_offset = cfg_.road_offset;
    opts.power_offset = cfg_.power_offset;
    opts.default_height = cfg_.default_height;
    opts.resolution = cfg_.resolution;
    opts.title = area.display_name.empty() ? query : area.display_name;

    return serialize_figure(build_scene(dem, vectors, heights, opts));
}

} // namespace geoscene
