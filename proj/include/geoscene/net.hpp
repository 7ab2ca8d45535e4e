#pragma once

#include <chrono>
#include <mutex>
#include <string>

namespace geoscene {

/// Enforces a minimum interval between requests to one host. acquire()
/// blocks until the next slot; slots are handed out in call order.
class RateLimiter {
public:
    explicit RateLimiter(double min_interval_s);
    void acquire();

private:
    std::mutex mutex_;
    std::chrono::steady_clock::duration interval_;
    std::chrono::steady_clock::time_point next_;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::string content_type;
};

struct HttpOptions {
    double min_interval_s = 0.0;
    int max_retries = 2;       // retries after the first attempt, 5xx/transport only
    double backoff_s = 0.25;   // doubled per retry
    std::string user_agent = "geoscene/0.1";
    double timeout_s = 60.0;
};

/// Blocking HTTP client for one upstream base URL with rate limiting and
/// bounded exponential-backoff retries. 4xx responses are returned to the
/// caller immediately; 5xx and transport failures are retried up to
/// max_retries, after which a 5xx is returned and a transport failure
/// throws UpstreamError with status 0.
class UpstreamClient {
public:
    UpstreamClient(std::string base_url, HttpOptions opts = {});

    HttpResponse get(const std::string& path_and_query);
    HttpResponse post_form(const std::string& path, const std::string& body);

    const std::string& base_url() const { return base_url_; }

private:
    HttpResponse request(const std::string& path, const std::string* form_body);

    std::string base_url_;
    HttpOptions opts_;
    RateLimiter limiter_;
};

/// Decode %XX escapes; malformed escapes pass through unchanged.
std::string percent_decode(const std::string& s);

/// Encode for use inside a query string value.
std::string percent_encode(const std::string& s);

} // namespace geoscene
