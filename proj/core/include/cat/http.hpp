#pragma once

#include <memory>
#include <string>
#include <thread>

#include "cat/service.hpp"

namespace cat {

/// HTTP+JSON binding of Service.
///   POST /sessions                       create_session
///   POST /sessions/{id}/students         register_student
///   POST /sessions/{id}/close            close_session
///   GET  /sessions/{id}/export?pseudo=1  export_session (application/x-ndjson)
///   POST /students/{id}/actions?lang=    submit_action
///   POST /students/{id}/navigate?lang=   navigate
///   GET  /students/{id}/view?lang=       view
///   GET  /students/{id}/dashboard?lang=  dashboard
///   POST /students/{id}/survey           submit_survey
///   GET  /catalog                        catalog
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds; port 0 picks a free one. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    bool listen();
    /// Serves on a background thread after bind().
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
};

}  // namespace cat
