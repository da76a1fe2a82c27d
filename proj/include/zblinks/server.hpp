#pragma once

#include <memory>
#include <string>

#include "zblinks/api.hpp"

namespace zblinks {

struct ServerOptions {
    std::string address = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
};

// cpp-httplib front end for ApiService.
class HttpServer {
public:
    explicit HttpServer(const ApiService& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds and returns the bound port; throws Errc::Io on failure.
    int bind(const ServerOptions& options);
    // Blocks serving requests until stop() is called.
    void serve();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace zblinks
