#include "wfreach/service.hpp"

#include <httplib.h>
#include <openssl/evp.h>

#include <cstdio>

namespace wfreach {

std::string content_hash(const std::string& text) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int k = 0; k < len; ++k) {
        std::snprintf(buf, sizeof buf, "%02x", digest[k]);
        hex += buf;
    }
    return hex;
}

struct Service::Session {
    std::string id;
    WorkflowNet wf;
    StructureReport structure;
    Json soundness;
    bool sound = false;
    bool unverified = false;

    std::once_flag built;
    std::shared_ptr<const NetAnalysis> analysis;
    std::optional<Error> build_error;
};

struct Service::Http {
    httplib::Server server;
};

namespace {

ServiceResponse json_response(int status, const Json& j) { return {status, j.dump(2) + "\n"}; }

ServiceResponse error_response(int status, const Error& e) {
    return json_response(status, error_json(e));
}

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto next = text.find(sep, pos);
        if (next == std::string::npos) next = text.size();
        if (next > pos) parts.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return parts;
}

bool query_flag(const std::string& query, const std::string& key) {
    for (const auto& part : split_on(query, '&')) {
        auto eq = part.find('=');
        auto name = part.substr(0, eq);
        auto value = eq == std::string::npos ? std::string("true") : part.substr(eq + 1);
        if (name == key) return value == "true" || value == "1";
    }
    return false;
}

Marking marking_from_json(const PetriNet& net, const Json& v) {
    if (v.is_string()) return parse_marking(net, v.get<std::string>());
    Marking m;
    auto place = [&](const std::string& label) {
        auto id = net.find(label);
        if (!id) throw Error("UNKNOWN_PLACE", "unknown place '" + label + "'");
        if (!net.is_place(*id)) throw Error("NOT_A_PLACE", "'" + label + "' is a transition, not a place");
        return *id;
    };
    if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_string()) throw Error("BAD_REQUEST", "marking array entries must be place ids");
            m.add(place(e.get<std::string>()));
        }
        return m;
    }
    if (v.is_object()) {
        for (const auto& [k, c] : v.items()) {
            if (!c.is_number_unsigned() || c.get<std::uint64_t>() == 0)
                throw Error("BAD_REQUEST", "token counts must be positive integers");
            m.add(place(k), c.get<std::uint32_t>());
        }
        return m;
    }
    throw Error("BAD_REQUEST", "marking must be a literal string, an array or an object");
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {}
Service::~Service() = default;

std::size_t Service::session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::shared_ptr<Service::Session> Service::lookup(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    lru_.splice(lru_.begin(), lru_, it->second.second);
    return it->second.first;
}

ServiceResponse Service::handle(const std::string& method, const std::string& target,
                                const std::string& body) {
    try {
        if (method == "OPTIONS") return {204, ""};
        auto qpos = target.find('?');
        auto path = target.substr(0, qpos);
        auto path_query = qpos == std::string::npos ? std::string() : target.substr(qpos + 1);
        auto parts = split_on(path, '/');
        if (parts.size() < 2 || parts[0] != "api" || parts[1] != "nets")
            return error_response(404, Error("NOT_FOUND", "no route for " + path));
        if (parts.size() == 2) {
            if (method != "POST")
                return error_response(405, Error("METHOD_NOT_ALLOWED", method + " " + path));
            return upload(body);
        }
        auto session = lookup(parts[2]);
        if (!session) return error_response(404, Error("UNKNOWN_NET", "unknown net id " + parts[2]));
        if (parts.size() == 3 && method == "GET") return describe(*session);
        if (parts.size() == 4) {
            if (parts[3] == "analyze" && method == "POST") return analyze(*session, body, false);
            if (parts[3] == "witness" && method == "POST") return analyze(*session, body, true);
            if (parts[3] == "concurrency" && method == "GET") return concurrency(*session, query_flag(path_query, "assumeSound"));
        }
        return error_response(404, Error("NOT_FOUND", "no route for " + method + " " + path));
    } catch (const StructureError& e) {
        Json j = error_json(e);
        return json_response(422, j);
    } catch (const Error& e) {
        return error_response(400, e);
    } catch (const std::exception& e) {
        return error_response(500, Error("INTERNAL", e.what()));
    }
}

ServiceResponse Service::upload(const std::string& body) {
    WorkflowNet wf;
    try {
        wf = parse_net(body);
    } catch (const Error& e) {
        return error_response(400, e);
    }
    auto canonical = dump_native(wf);
    auto id = content_hash(canonical);

    std::shared_ptr<Session> session = lookup(id);
    if (!session) {
        auto s = std::make_shared<Session>();
        s->id = id;
        s->wf = std::move(wf);
        s->structure = validate_structure(s->wf);
        Json snd;
        if (!s->structure.analyzable()) {
            snd["status"] = "not-applicable";
            snd["detail"] = "structural preconditions fail";
        } else {
            try {
                auto r = check_soundness(s->wf, options_.state_cap);
                snd["status"] = r.sound ? "verified" : "unsound";
                snd["detail"] = r.detail;
                snd["states"] = r.states;
                s->sound = r.sound;
            } catch (const Error& e) {
                if (e.code() != "CAP_EXCEEDED") throw;
                snd["status"] = "unverified";
                snd["detail"] = e.what();
                s->unverified = true;
            }
        }
        s->soundness = snd;

        std::lock_guard lock(mutex_);
        auto it = sessions_.find(id);
        if (it != sessions_.end()) {
            session = it->second.first;
        } else {
            lru_.push_front(id);
            sessions_.emplace(id, std::make_pair(s, lru_.begin()));
            while (sessions_.size() > options_.max_sessions) {
                sessions_.erase(lru_.back());
                lru_.pop_back();
            }
            session = s;
        }
    }
    Json j;
    j["netId"] = session->id;
    j["structureReport"] = structure_json(session->wf.net, session->structure);
    j["soundness"] = session->soundness;
    return json_response(200, j);
}

ServiceResponse Service::describe(Session& s) {
    Json j;
    j["netId"] = s.id;
    j["net"] = net_json(s.wf);
    j["structureReport"] = structure_json(s.wf.net, s.structure);
    j["soundness"] = s.soundness;
    return json_response(200, j);
}

std::shared_ptr<const NetAnalysis> Service::analysis_of(Session& s, bool assume_sound) {
    if (!s.structure.analyzable()) throw StructureError(s.structure);
    if (s.unverified && !assume_sound)
        throw Error("SOUNDNESS_UNVERIFIED",
                    "state space exceeds the cap; pass assumeSound to analyze anyway");
    if (!s.sound && !s.unverified)
        throw Error("UNSOUND", "net is not sound; structural analysis is undefined");
    std::call_once(s.built, [&] {
        try {
            AnalysisOptions opts;
            opts.assume_sound = true;
            s.analysis = std::make_shared<const NetAnalysis>(NetAnalysis::build(s.wf, opts));
        } catch (const Error& e) {
            s.build_error = e;
        }
    });
    if (s.build_error) throw *s.build_error;
    return s.analysis;
}

ServiceResponse Service::analyze(Session& s, const std::string& body, bool witness_only) {
    Json req;
    try {
        req = Json::parse(body.empty() ? "{}" : body);
    } catch (const Json::parse_error& e) {
        return error_response(400, Error("BAD_REQUEST", std::string("invalid JSON: ") + e.what()));
    }
    if (!req.is_object() || !req.contains("marking"))
        return error_response(400, Error("BAD_REQUEST", "request needs a 'marking' field"));
    auto mode = parse_mode(req.value("mode", std::string("exact")));
    bool assume_sound = req.value("assumeSound", false);
    auto m = marking_from_json(s.wf.net, req["marking"]);
    require_valid_marking(s.wf.net, m);
    if (!s.structure.analyzable()) {
        Json j = error_json(StructureError(s.structure));
        j["structureReport"] = structure_json(s.wf.net, s.structure);
        return json_response(422, j);
    }
    std::shared_ptr<const NetAnalysis> a;
    try {
        a = analysis_of(s, assume_sound);
    } catch (const StructureError& e) {
        Json j = error_json(e);
        j["structureReport"] = structure_json(s.wf.net, e.report());
        return json_response(422, j);
    } catch (const Error& e) {
        return error_response(422, e);
    }
    auto report = is_reachable(*a, m, mode);
    report.soundness = s.unverified ? "assumed" : "verified";
    if (!witness_only) return json_response(200, report_json(s.wf.net, report));
    if (!report.witness)
        return error_response(422, Error("NOT_REACHABLE", std::string("marking is ") +
                                                              verdict_name(report.verdict) +
                                                              "; no witness exists"));
    Json j;
    j["verdict"] = verdict_name(report.verdict);
    j["mode"] = mode_name(mode);
    j["marking"] = format_marking(s.wf.net, m);
    j["witness"] = witness_json(s.wf.net, *report.witness);
    return json_response(200, j);
}

ServiceResponse Service::concurrency(Session& s, bool assume_sound) {
    std::shared_ptr<const NetAnalysis> a;
    try {
        a = analysis_of(s, assume_sound);
    } catch (const StructureError& e) {
        Json j = error_json(e);
        j["structureReport"] = structure_json(s.wf.net, e.report());
        return json_response(422, j);
    } catch (const Error& e) {
        return error_response(422, e);
    }
    Json j;
    j["netId"] = s.id;
    j["concurrency"] = concurrency_json(s.wf.net, a->concurrency());
    return json_response(200, j);
}

namespace {

void install(httplib::Server& server, Service& service) {
    auto cors = service.options().cors_origin;
    auto adapt = [&service, cors](const httplib::Request& req, httplib::Response& res) {
        auto target = req.path;
        char sep = '?';
        for (const auto& [k, v] : req.params) {
            target += sep + k + "=" + v;
            sep = '&';
        }
        auto out = service.handle(req.method, target, req.body);
        res.status = out.status;
        res.set_header("Access-Control-Allow-Origin", cors);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        if (!out.body.empty()) res.set_content(out.body, out.content_type);
    };
    server.Get(R"(/.*)", adapt);
    server.Post(R"(/.*)", adapt);
    server.Options(R"(/.*)", adapt);
}

}  // namespace

bool Service::listen(const std::string& host, int port) {
    if (!http_) {
        http_ = std::make_unique<Http>();
        install(http_->server, *this);
    }
    return http_->server.listen(host, port);
}

int Service::bind_any_port(const std::string& host) {
    if (!http_) {
        http_ = std::make_unique<Http>();
        install(http_->server, *this);
    }
    return http_->server.bind_to_any_port(host);
}

bool Service::listen_after_bind() { return http_ && http_->server.listen_after_bind(); }

void Service::stop() {
    if (http_) http_->server.stop();
}

}  // namespace wfreach
