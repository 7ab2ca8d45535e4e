#include "support/fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "geoscene/errors.hpp"
#include "support/tiff_writer.hpp"

namespace testsupport {

std::string testdata(const std::string& name) {
    return std::string(TESTDATA_DIR) + "/" + name;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("test fixture missing: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

geoscene::DemGrid make_grid(int width, int height, double origin_x, double origin_y,
                            double pixel,
                            const std::function<double(int, int)>& value,
                            geoscene::Crs crs) {
    geoscene::DemGrid g;
    g.crs = crs;
    g.origin_x = origin_x;
    g.origin_y = origin_y;
    g.pixel_w = pixel;
    g.pixel_h = pixel;
    g.width = width;
    g.height = height;
    g.has_nodata = true; // tests poke g.nodata into cells directly
    g.values.reserve(static_cast<std::size_t>(width) * height);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) g.values.push_back(value(r, c));
    return g;
}

geoscene::Ring random_simple_polygon(Rng& rng, int n, double cx, double cy,
                                     double rmin, double rmax) {
    geoscene::Ring ring;
    ring.crs = geoscene::Crs::Mercator;
    ring.pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        // Stratified angles: each vertex stays inside its own arc, so the
        // sequence is strictly increasing and the polygon star-shaped.
        const double arc = 2.0 * std::numbers::pi / n;
        const double theta = arc * (i + 0.2 + 0.6 * rng.uniform(0.0, 1.0));
        const double r = rng.uniform(rmin, rmax);
        ring.pts.push_back(
            geoscene::Vec2{cx + r * std::cos(theta), cy + r * std::sin(theta)});
    }
    return ring;
}

MeshCheck check_closed_mesh(const geoscene::TriMesh& m) {
    MeshCheck out;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (const auto& t : m.tris) {
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            out.detail = "triangle with repeated vertex";
            return out;
        }
        for (int e = 0; e < 3; ++e) directed[{t[e], t[(e + 1) % 3]}]++;
    }

    out.watertight = true;
    std::size_t undirected = 0;
    for (const auto& [edge, count] : directed) {
        if (count != 1) {
            out.watertight = false;
            out.detail = "directed edge used " + std::to_string(count) + " times";
            break;
        }
        const auto rev = directed.find({edge.second, edge.first});
        if (rev == directed.end()) {
            out.watertight = false;
            out.detail = "boundary edge " + std::to_string(edge.first) + "->" +
                         std::to_string(edge.second);
            break;
        }
        if (edge.first < edge.second) ++undirected;
    }

    const std::ptrdiff_t euler = static_cast<std::ptrdiff_t>(m.vertex_count()) -
                                 static_cast<std::ptrdiff_t>(undirected) +
                                 static_cast<std::ptrdiff_t>(m.triangle_count());
    out.euler_ok = out.watertight && euler == 2;
    if (!out.euler_ok && out.detail.empty())
        out.detail = "V-E+F = " + std::to_string(euler);

    double vol6 = 0.0;
    for (const auto& t : m.tris) {
        const double ax = m.xs[t[0]], ay = m.ys[t[0]], az = m.zs[t[0]];
        const double bx = m.xs[t[1]], by = m.ys[t[1]], bz = m.zs[t[1]];
        const double cx = m.xs[t[2]], cy = m.ys[t[2]], cz = m.zs[t[2]];
        vol6 += ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) +
                az * (bx * cy - by * cx);
    }
    out.signed_volume = vol6 / 6.0;
    return out;
}

namespace {

void start_server(httplib::Server& srv, int& port, std::vector<std::thread>& threads) {
    port = srv.bind_to_any_port("127.0.0.1");
    if (port <= 0) throw std::runtime_error("mock upstream failed to bind");
    threads.emplace_back([&srv] { srv.listen_after_bind(); });
    srv.wait_until_ready();
}

} // namespace

MockUpstreams::MockUpstreams() {
    geocoder_.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
        ++geocoder_calls;
        {
            std::lock_guard lock(record_mutex_);
            last_geocoder_path = req.target; // raw, order and escapes intact
            last_user_agent = req.get_header_value("User-Agent");
        }
        if (req.get_param_value("q") == geocode_match && !geocode_body.empty()) {
            res.set_content(geocode_body, "application/json");
        } else {
            res.set_content(R"({"type":"FeatureCollection","features":[]})",
                            "application/json");
        }
    });

    dem_.Get("/API/globaldem", [this](const httplib::Request& req, httplib::Response& res) {
        ++dem_calls;
        const int inflight = ++dem_inflight;
        int expected = dem_max_inflight.load();
        while (inflight > expected &&
               !dem_max_inflight.compare_exchange_weak(expected, inflight)) {
        }
        if (const int delay = dem_delay_ms.load(); delay > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        --dem_inflight;
        {
            std::lock_guard lock(record_mutex_);
            last_dem_path = req.target; // raw, order and escapes intact
        }
        if (req.get_param_value("API_Key") == "badkey") {
            res.status = 401;
            res.set_content("{\"error\":\"invalid key\"}", "application/json");
            return;
        }
        const int status = dem_status.load();
        if (status != 200) {
            res.status = status;
            res.set_content("upstream failure", "text/plain");
            return;
        }
        res.set_content(dem_body, "image/tiff");
    });

    overpass_.Post("/api/interpreter",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       ++overpass_calls;
                       const std::string q = req.get_param_value("data");
                       {
                           std::lock_guard lock(record_mutex_);
                           last_overpass_query = q;
                       }
                       const int status = overpass_status.load();
                       if (status != 200) {
                           res.status = status;
                           res.set_content("upstream failure", "text/plain");
                           return;
                       }
                       std::string body;
                       if (q.find("highway") != std::string::npos) body = roads_body;
                       else if (q.find("power") != std::string::npos) body = power_body;
                       else body = buildings_body;
                       res.set_content(body, "application/json");
                   });

    heights_.Get("/heights", [this](const httplib::Request&, httplib::Response& res) {
        ++heights_calls;
        res.set_content(heights_body, "application/json");
    });

    start_server(geocoder_, geocoder_port_, threads_);
    start_server(dem_, dem_port_, threads_);
    start_server(overpass_, overpass_port_, threads_);
    start_server(heights_, heights_port_, threads_);
}

MockUpstreams::~MockUpstreams() {
    geocoder_.stop();
    dem_.stop();
    overpass_.stop();
    heights_.stop();
    for (auto& t : threads_) t.join();
}

std::unique_ptr<MockUpstreams> make_alna_upstreams() {
    auto m = std::make_unique<MockUpstreams>();
    m->geocode_body = read_text(testdata("alna_geocode.json"));
    m->roads_body = read_text(testdata("alna_roads.json"));
    m->power_body = read_text(testdata("alna_power.json"));
    m->buildings_body = read_text(testdata("alna_buildings.json"));
    m->heights_body = read_text(testdata("alna_heights.geojson"));

    // The DEM mock serves the ASCII fixture re-encoded as a GeoTIFF; values
    // are quarter-steps, exact in both float32 and decimal text.
    const geoscene::DemGrid g = geoscene::parse_ascii_grid(read_text(testdata("alna.asc")));
    TiffSpec spec;
    spec.sample = TiffSpec::Sample::Float32;
    spec.deflate = true;
    spec.rows_per_strip = 8;
    spec.origin_x = g.origin_x;
    spec.origin_y = g.origin_y;
    spec.pixel_w = g.pixel_w;
    spec.pixel_h = g.pixel_h;
    spec.nodata = g.nodata;
    const auto tiff = write_tiff(g.values, g.width, g.height, spec);
    m->dem_body.assign(tiff.begin(), tiff.end());
    return m;
}

geoscene::Config alna_config(const MockUpstreams& m) {
    geoscene::Config cfg;
    cfg.geocoder_url = m.geocoder_url();
    cfg.dem_url = m.dem_url();
    cfg.overpass_url = m.overpass_url();
    cfg.heights_mode = geoscene::HeightsMode::File;
    cfg.heights_path = testdata("alna_heights.geojson");
    cfg.geocoder_min_interval_s = 0.0; // no point pacing a local mock
    cfg.retry_backoff_s = 0.01;
    cfg.listen_port = 0;
    return cfg;
}

} // namespace testsupport
