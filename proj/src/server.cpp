#include "zblinks/server.hpp"

#include <algorithm>
#include <cctype>

#include <httplib.h>

namespace zblinks {

struct HttpServer::Impl {
    const ApiService& service;
    httplib::Server http;

    explicit Impl(const ApiService& s) : service(s) {}

    void forward(const httplib::Request& req, httplib::Response& res) const {
        ApiRequest in;
        in.method = req.method;
        in.path = req.path;
        for (const auto& [k, v] : req.params) in.params.emplace(k, v);  // first value wins
        for (const auto& [k, v] : req.headers) {
            std::string name = k;
            std::transform(name.begin(), name.end(), name.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            in.headers.emplace(std::move(name), v);
        }
        in.body = req.body;

        const ApiResponse out = service.handle(in);
        res.status = out.status;
        for (const auto& [k, v] : out.headers) res.set_header(k, v);
        res.set_content(out.body.dump(), "application/json");
    }
};

HttpServer::HttpServer(const ApiService& service) : impl_(std::make_unique<Impl>(service)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->forward(req, res); };
    // every path goes through the service so unknown routes get the JSON error shape
    const char* any = R"(/.*)";
    // httplib defaults to SO_REUSEPORT, which lets a second server share the port silently
    impl_->http.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    impl_->http.Get(any, handler);
    impl_->http.Put(any, handler);
    impl_->http.Post(any, handler);
    impl_->http.Delete(any, handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const ServerOptions& options) {
    int port = options.port;
    if (port == 0) {
        port = impl_->http.bind_to_any_port(options.address);
        if (port < 0) throw Error(Errc::Io, "cannot bind " + options.address);
    } else if (!impl_->http.bind_to_port(options.address, port)) {
        throw Error(Errc::Io, "cannot bind " + options.address + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::serve() { impl_->http.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->http.stop();
}

}  // namespace zblinks
