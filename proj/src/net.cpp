#include "geoscene/net.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>

#include "geoscene/errors.hpp"

namespace geoscene {

RateLimiter::RateLimiter(double min_interval_s)
    : interval_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(min_interval_s < 0.0 ? 0.0 : min_interval_s))),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    if (interval_.count() == 0) return;
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        slot = next_ > now ? next_ : now;
        next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
}

UpstreamClient::UpstreamClient(std::string base_url, HttpOptions opts)
    : base_url_(std::move(base_url)), opts_(opts), limiter_(opts.min_interval_s) {}

HttpResponse UpstreamClient::get(const std::string& path_and_query) {
    return request(path_and_query, nullptr);
}

HttpResponse UpstreamClient::post_form(const std::string& path, const std::string& body) {
    return request(path, &body);
}

HttpResponse UpstreamClient::request(const std::string& path, const std::string* form_body) {
    double backoff = opts_.backoff_s;
    std::string last_error;
    for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            backoff *= 2.0;
        }
        limiter_.acquire();

        // httplib clients are not safe to share across threads; one per request.
        httplib::Client client(base_url_);
        client.set_connection_timeout(std::chrono::duration<double>(opts_.timeout_s));
        client.set_read_timeout(std::chrono::duration<double>(opts_.timeout_s));
        client.set_default_headers({{"User-Agent", opts_.user_agent}});
        client.set_follow_location(true);

        httplib::Result res =
            form_body ? client.Post(path, *form_body, "application/x-www-form-urlencoded")
                      : client.Get(path);

        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        HttpResponse out;
        out.status = res->status;
        out.body = res->body;
        out.content_type = res->get_header_value("Content-Type");
        if (out.status >= 500 && attempt < opts_.max_retries) continue;
        return out;
    }
    throw UpstreamError(0, "upstream " + base_url_ + path + " unreachable: " + last_error);
}

std::string percent_decode(const std::string& s) {
    auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            const int hi = hex(s[i + 1]);
            const int lo = hex(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(s[i]);
    }
    return out;
}

std::string percent_encode(const std::string& s) {
    static const char* kHex = "0123456789ABCDEF";
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        const bool safe = std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~';
        if (safe) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xf]);
        }
    }
    return out;
}

} // namespace geoscene
