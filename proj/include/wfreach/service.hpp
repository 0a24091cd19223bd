#pragma once

#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "wfreach/decide.hpp"
#include "wfreach/report_json.hpp"

namespace wfreach {

struct ServiceOptions {
    std::size_t max_sessions = 64;
    std::size_t state_cap = default_state_cap;
    std::string cors_origin = "*";
};

struct ServiceResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

std::string content_hash(const std::string& text);

class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();

    // Transport-independent entry point; thread-safe. target may carry a query string.
    ServiceResponse handle(const std::string& method, const std::string& target,
                           const std::string& body);

    const ServiceOptions& options() const { return options_; }
    std::size_t session_count() const;

    // Blocks until stop() is called from another thread.
    bool listen(const std::string& host, int port);
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

private:
    struct Session;

    std::shared_ptr<Session> lookup(const std::string& id);
    ServiceResponse upload(const std::string& body);
    ServiceResponse describe(Session& s);
    ServiceResponse analyze(Session& s, const std::string& body, bool witness_only);
    ServiceResponse concurrency(Session& s, bool assume_sound);
    std::shared_ptr<const NetAnalysis> analysis_of(Session& s, bool assume_sound);

    ServiceOptions options_;
    mutable std::mutex mutex_;
    std::list<std::string> lru_;
    std::unordered_map<std::string, std::pair<std::shared_ptr<Session>, std::list<std::string>::iterator>>
        sessions_;
    struct Http;
    std::unique_ptr<Http> http_;
};

}  // namespace wfreach
