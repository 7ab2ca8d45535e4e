#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "geoscene/config.hpp"
#include "geoscene/geomath.hpp"
#include "geoscene/raster.hpp"
#include "geoscene/terrain.hpp"

namespace testsupport {

// Deterministic splitmix64; identical sequences on every platform.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform(double a, double b) {
        return a + (b - a) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }

    int uniform_int(int a, int b) { // inclusive bounds
        return a + static_cast<int>(next() % static_cast<std::uint64_t>(b - a + 1));
    }
};

std::string read_text(const std::string& path);

geoscene::DemGrid make_grid(int width, int height, double origin_x, double origin_y,
                            double pixel,
                            const std::function<double(int, int)>& value,
                            geoscene::Crs crs = geoscene::Crs::Mercator);

// Star-shaped polygon around (cx, cy): strictly increasing angles with
// guaranteed gaps, radii in [rmin, rmax]. Always simple, always CCW.
geoscene::Ring random_simple_polygon(Rng& rng, int n, double cx, double cy,
                                     double rmin, double rmax);

struct MeshCheck {
    bool watertight = false; // every directed edge paired with its reverse
    bool euler_ok = false;   // V - E + F == 2
    double signed_volume = 0.0;
    std::string detail;
};

MeshCheck check_closed_mesh(const geoscene::TriMesh& m);

// Local stand-ins for the four upstream services, each on an ephemeral
// port with a call counter. Payloads are plain data members; tests mutate
// them before issuing requests.
class MockUpstreams {
public:
    MockUpstreams();
    ~MockUpstreams();

    MockUpstreams(const MockUpstreams&) = delete;
    MockUpstreams& operator=(const MockUpstreams&) = delete;

    std::string geocoder_url() const { return url(geocoder_port_); }
    std::string dem_url() const { return url(dem_port_); }
    std::string overpass_url() const { return url(overpass_port_); }
    std::string heights_url() const { return url(heights_port_); }

    int total_calls() const {
        return geocoder_calls + dem_calls + overpass_calls + heights_calls;
    }

    // Response payloads.
    std::string geocode_body;      // served when the q parameter matches
    std::string geocode_match = "Alna, Oslo, Norway";
    std::string dem_body;          // TIFF bytes
    std::string roads_body;
    std::string power_body;
    std::string buildings_body;
    std::string heights_body;

    // Status overrides for failure-path tests.
    std::atomic<int> dem_status{200};
    std::atomic<int> overpass_status{200};

    // Concurrency probe: the DEM handler holds each request for
    // dem_delay_ms and records the peak number in flight.
    std::atomic<int> dem_delay_ms{0};
    std::atomic<int> dem_inflight{0};
    std::atomic<int> dem_max_inflight{0};

    std::atomic<int> geocoder_calls{0};
    std::atomic<int> dem_calls{0};
    std::atomic<int> overpass_calls{0};
    std::atomic<int> heights_calls{0};

    // Most recent request paths, for interface assertions.
    std::string last_geocoder_path;
    std::string last_dem_path;
    std::string last_overpass_query;
    std::string last_user_agent;

private:
    static std::string url(int port) { return "http://127.0.0.1:" + std::to_string(port); }

    httplib::Server geocoder_, dem_, overpass_, heights_;
    int geocoder_port_ = 0, dem_port_ = 0, overpass_port_ = 0, heights_port_ = 0;
    std::vector<std::thread> threads_;
    std::mutex record_mutex_;
};

// Fixture bundle for the "Alna, Oslo, Norway" scene: mocks preloaded with
// the tests/data payloads (DEM served as float32 deflate GeoTIFF built from
// the ASCII fixture) and a Config pointing at them.
std::unique_ptr<MockUpstreams> make_alna_upstreams();
geoscene::Config alna_config(const MockUpstreams& m);

std::string testdata(const std::string& name);

} // namespace testsupport
