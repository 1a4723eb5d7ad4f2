#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "server/session.hpp"

namespace manipos {

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 1111;  // 0 picks a free port
    std::chrono::milliseconds pollTimeout = std::chrono::seconds(25);
};

/// HTTP front end of a Workspace:
///   GET  /:file                   client shell
///   GET  /api/:file/doc           document model
///   GET  /api/:file/poll?token=   long poll until the token changes
///   GET  /api/:file/autocomplete?node=&prefix=
///   POST /api/:file/action        one action, JSON body
///   POST /api/:file/synth         start a synthesis job
///   GET  /api/:file/synth/:jobId  job status
class HttpServer {
public:
    HttpServer(Workspace& ws, ServerOptions opts);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; returns the port, or -1 on failure.
    int bind();
    /// Serves until stop(); call bind() first.
    void serve();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Port to listen on: MANIPOS_PORT when set to a valid port, else `fallback`.
int portFromEnv(int fallback);

}  // namespace manipos
