#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "geoscene/config.hpp"
#include "geoscene/errors.hpp"
#include "geoscene/service.hpp"
#include "support/fixtures.hpp"

using namespace geoscene;
using nlohmann::json;

TEST_CASE("place slugs decode to geocoder queries") {
    CHECK(parse_place_slug("Alna-Oslo-Norway") == "Alna, Oslo, Norway");
    CHECK(parse_place_slug("M%C3%A5%C3%B8yna-Gulen-Vestland-Norway") ==
          "Måøyna, Gulen, Vestland, Norway");
    CHECK(parse_place_slug("A%20B-C") == "A B, C");
    CHECK(parse_place_slug("Berlin") == "Berlin");
    CHECK(parse_place_slug("%20padded%20") == "padded");

    CHECK_THROWS_AS(parse_place_slug(""), BadRequestError);
    CHECK_THROWS_AS(parse_place_slug("%20%20"), BadRequestError);
}

TEST_CASE("figure cache serves fresh entries and expires stale ones") {
    FigureCache cache(0.05);
    CHECK(cache.get("k") == nullptr);

    cache.put("k", "body-1");
    auto hit = cache.get("k");
    REQUIRE(hit != nullptr);
    CHECK(*hit == "body-1");

    cache.put("k", "body-2"); // overwrite refreshes
    CHECK(*cache.get("k") == "body-2");

    std::this_thread::sleep_for(std::chrono::milliseconds(80));
    CHECK(cache.get("k") == nullptr);
}

TEST_CASE("config validation rejects unusable settings") {
    auto mocks = testsupport::make_alna_upstreams();
    const Config good = testsupport::alna_config(*mocks);
    CHECK_NOTHROW(validate_config(good));

    Config c = good;
    c.spacing = 0.0;
    CHECK_THROWS_AS(validate_config(c), ConfigError);

    c = good;
    c.heights_path.clear();
    CHECK_THROWS_AS(validate_config(c), ConfigError);

    c = good;
    c.heights_mode = HeightsMode::Http; // no heights_url configured
    CHECK_THROWS_AS(validate_config(c), ConfigError);

    c = good;
    c.pipeline_concurrency = 0;
    CHECK_THROWS_AS(validate_config(c), ConfigError);

    c = good;
    c.pixel_budget = 0;
    CHECK_THROWS_AS(validate_config(c), ConfigError);

    c = good;
    c.listen_port = 70000;
    CHECK_THROWS_AS(validate_config(c), ConfigError);

    c = good;
    c.geocoder_url.clear();
    CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("config files parse as ordered key=value entries") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "geoscene_conf_test.conf";
    {
        std::ofstream out(path);
        out << "# upstreams\n"
            << "\n"
            << "geocoder_url = http://geo.example\n"
            << "  port=9000  \n"
            << "user_agent = probe/1.0 (test)\n";
    }
    const auto entries = read_config_file(path.string());
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].first == "geocoder_url");
    CHECK(entries[0].second == "http://geo.example");
    CHECK(entries[1].first == "port");
    CHECK(entries[1].second == "9000");
    CHECK(entries[2].second == "probe/1.0 (test)"); // values may contain spaces

    {
        std::ofstream out(path);
        out << "no equals sign here\n";
    }
    CHECK_THROWS_AS(read_config_file(path.string()), ConfigError);
    fs::remove(path);

    CHECK_THROWS_AS(read_config_file((path / "missing").string()), ConfigError);
}

TEST_CASE("config entries set their fields and reject junk") {
    Config c;
    apply_config_entry(c, "dem_url", "http://dem.example");
    apply_config_entry(c, "heights_mode", "http");
    apply_config_entry(c, "heights_url", "http://h.example");
    apply_config_entry(c, "host", "0.0.0.0");
    apply_config_entry(c, "port", "8123");
    apply_config_entry(c, "road_offset", "2.5");
    apply_config_entry(c, "pixel_budget", "500000");
    CHECK(c.dem_url == "http://dem.example");
    CHECK(c.heights_mode == HeightsMode::Http);
    CHECK(c.heights_url == "http://h.example");
    CHECK(c.listen_host == "0.0.0.0");
    CHECK(c.listen_port == 8123);
    CHECK(c.road_offset == 2.5);
    CHECK(c.pixel_budget == 500000);

    CHECK_THROWS_AS(apply_config_entry(c, "no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "port", "eighty"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "spacing", "1.5x"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "heights_mode", "ftp"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(c, "pixel_budget", "-4"), ConfigError);
}

TEST_CASE("one request drives the full pipeline and fills the cache") {
    auto mocks = testsupport::make_alna_upstreams();
    Service service(testsupport::alna_config(*mocks));

    int status = 0;
    const std::string body = service.handle_place("goodkey", "Alna-Oslo-Norway", status);
    CHECK(status == 200);
    CHECK(mocks->geocoder_calls == 1);
    CHECK(mocks->dem_calls == 1);
    CHECK(mocks->overpass_calls == 3); // roads, power lines, buildings
    CHECK(mocks->heights_calls == 0);  // file-mode height provider

    const json doc = json::parse(body);
    REQUIRE(doc.contains("data"));
    CHECK(doc["data"][0]["type"] == "mesh3d");
    CHECK(doc["data"][0]["name"] == "terrain");
    CHECK(doc["layout"]["title"] == "Alna, Oslo, Norway");

    // Repeat: served from cache, upstreams untouched, bytes identical.
    const int calls_before = mocks->total_calls();
    int status2 = 0;
    const std::string body2 = service.handle_place("goodkey", "Alna-Oslo-Norway", status2);
    CHECK(status2 == 200);
    CHECK(body2 == body);
    CHECK(mocks->total_calls() == calls_before);
}

TEST_CASE("error conditions map to distinct statuses and JSON bodies") {
    auto mocks = testsupport::make_alna_upstreams();

    const auto expect = [&](Service& svc, const std::string& key,
                            const std::string& slug, int expected_status) {
        int status = 0;
        const std::string body = svc.handle_place(key, slug, status);
        CHECK(status == expected_status);
        const json doc = json::parse(body);
        REQUIRE(doc.contains("error"));
        CHECK(doc["error"].is_string());
        CHECK_FALSE(doc["error"].get<std::string>().empty());
    };

    {
        Service svc(testsupport::alna_config(*mocks));
        expect(svc, "badkey", "Alna-Oslo-Norway", 401);   // rejected API key
        expect(svc, "goodkey", "Atlantis", 404);          // geocoder found nothing
        expect(svc, "goodkey", "%20", 400);               // empty place
        expect(svc, "", "Alna-Oslo-Norway", 400);         // missing key segment
    }

    {
        mocks->dem_status = 500;
        Service svc(testsupport::alna_config(*mocks));
        expect(svc, "goodkey", "Alna-Oslo-Norway", 502); // upstream failure
        mocks->dem_status = 200;
    }

    {
        const std::string real_dem = mocks->dem_body;
        mocks->dem_body = "certainly not a tiff";
        Service svc(testsupport::alna_config(*mocks));
        expect(svc, "goodkey", "Alna-Oslo-Norway", 502); // unparseable upstream data
        mocks->dem_body = real_dem;
    }

    {
        mocks->overpass_status = 504;
        Service svc(testsupport::alna_config(*mocks));
        expect(svc, "goodkey", "Alna-Oslo-Norway", 502);
        mocks->overpass_status = 200;
    }

    {
        Config cfg = testsupport::alna_config(*mocks);
        cfg.pixel_budget = 10; // far below the fixture's output size
        Service svc(cfg);
        const int overpass_before = mocks->overpass_calls.load();
        expect(svc, "goodkey", "Alna-Oslo-Norway", 422);
        // Refused before any vector fetch work started.
        CHECK(mocks->overpass_calls.load() == overpass_before);
    }
}

TEST_CASE("the pipeline gate bounds concurrent executions") {
    auto mocks = testsupport::make_alna_upstreams();
    Config cfg = testsupport::alna_config(*mocks);
    cfg.pipeline_concurrency = 1;
    Service service(cfg);

    mocks->dem_delay_ms = 120;
    int s1 = 0, s2 = 0;
    std::string b1, b2;
    std::thread t1([&] { b1 = service.handle_place("goodkey", "Alna-Oslo-Norway", s1); });
    std::thread t2([&] { b2 = service.handle_place("goodkey", "Alna-Oslo-Norway", s2); });
    t1.join();
    t2.join();

    CHECK(s1 == 200);
    CHECK(s2 == 200);
    CHECK(b1 == b2);
    CHECK(mocks->dem_max_inflight == 1); // never two pipelines at once
}

TEST_CASE("the HTTP surface serves figures, health, and request errors") {
    auto mocks = testsupport::make_alna_upstreams();
    Service service(testsupport::alna_config(*mocks));
    const int port = service.bind_any();
    REQUIRE(port > 0);
    std::thread server_thread([&] { service.listen_after_bind(); });
    REQUIRE(service.wait_until_ready());

    httplib::Client client("127.0.0.1", port);

    auto health = client.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);

    // Before anything lands in the cache: a bad key reaches the elevation
    // upstream and bounces. (Cached figures are keyed by place only, so a
    // later bad-key request for the same place would be served from cache.)
    auto unauthorized = client.Get("/badkey/Alna-Oslo-Norway");
    REQUIRE(unauthorized);
    CHECK(unauthorized->status == 401);
    CHECK(json::parse(unauthorized->body).contains("error"));

    auto res = client.Get("/goodkey/Alna-Oslo-Norway");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/json");
    const json doc = json::parse(res->body);
    CHECK(doc["data"].is_array());
    CHECK(doc["layout"]["scene"]["aspectmode"] == "data");

    // Wrong shapes: no handler matches, the error handler answers.
    for (const char* bad : {"/", "/only-one-segment", "/a/b/c"}) {
        auto r = client.Get(bad);
        REQUIRE(r);
        CHECK(r->status == 400);
        const json err = json::parse(r->body);
        CHECK(err.contains("error"));
    }

    auto post = client.Post("/goodkey/Alna-Oslo-Norway", "x", "text/plain");
    REQUIRE(post);
    CHECK(post->status == 400);

    auto missing = client.Get("/goodkey/Nowhere-At-All");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    service.stop();
    server_thread.join();
}
