#include "cat/http.hpp"

#include <httplib.h>

namespace cat {

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;
};

namespace {

void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.text(), r.content_type);
}

// Parses the request body; writes a 400 and returns nullopt on bad JSON.
std::optional<Json> body_of(const httplib::Request& req, httplib::Response& res) {
    if (req.body.empty()) return Json::object();
    Json j = Json::parse(req.body, nullptr, false);
    if (j.is_discarded()) {
        send(res, {400, {{"error", "bad_request"}, {"message", "body is not valid JSON"}}});
        return std::nullopt;
    }
    return j;
}

std::string lang_of(const httplib::Request& req) {
    return req.has_param("lang") ? req.get_param_value("lang") : "en";
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(new Impl{service, {}}) {
    auto& srv = impl_->server;
    Service& svc = impl_->service;

    srv.Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
        if (auto b = body_of(req, res)) send(res, svc.create_session(*b));
    });
    srv.Post(R"(/sessions/([^/]+)/students)", [&svc](const httplib::Request& req, httplib::Response& res) {
        if (auto b = body_of(req, res)) send(res, svc.register_student(req.matches[1], *b));
    });
    srv.Post(R"(/sessions/([^/]+)/close)", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.close_session(req.matches[1]));
    });
    srv.Get(R"(/sessions/([^/]+)/export)", [&svc](const httplib::Request& req, httplib::Response& res) {
        bool pseudo = req.has_param("pseudo") && req.get_param_value("pseudo") != "0";
        send(res, svc.export_session(req.matches[1], pseudo));
    });
    srv.Post(R"(/students/([^/]+)/actions)", [&svc](const httplib::Request& req, httplib::Response& res) {
        if (auto b = body_of(req, res)) send(res, svc.submit_action(req.matches[1], *b, lang_of(req)));
    });
    srv.Post(R"(/students/([^/]+)/navigate)", [&svc](const httplib::Request& req, httplib::Response& res) {
        if (auto b = body_of(req, res)) send(res, svc.navigate(req.matches[1], *b, lang_of(req)));
    });
    srv.Get(R"(/students/([^/]+)/view)", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.view(req.matches[1], lang_of(req)));
    });
    srv.Get(R"(/students/([^/]+)/dashboard)", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.dashboard(req.matches[1], lang_of(req)));
    });
    srv.Post(R"(/students/([^/]+)/survey)", [&svc](const httplib::Request& req, httplib::Response& res) {
        if (auto b = body_of(req, res)) send(res, svc.submit_survey(req.matches[1], *b));
    });
    srv.Get("/catalog", [&svc](const httplib::Request&, httplib::Response& res) { send(res, svc.catalog()); });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::start() {
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void HttpServer::stop() {
    impl_->server.stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace cat
