#ifndef PONDWATCH_HTTP_SERVICE_HPP
#define PONDWATCH_HTTP_SERVICE_HPP

#include <memory>
#include <string>

#include "pondwatch/channel_store.hpp"

namespace pondwatch {

// HTTP front end over a ChannelStore:
//   POST /update?api_key=K&field1=v...      -> entry id, or "0" with 401/400
//   GET  /channels/{id}/feeds.{csv|json|xml}?results=N&start=...&end=...
//   GET  /channels/{id}/fields/{n}.{csv|json|xml}
//   GET  /healthz
class TelemetryServer {
public:
    explicit TelemetryServer(ChannelStore& store);
    ~TelemetryServer();

    TelemetryServer(const TelemetryServer&) = delete;
    TelemetryServer& operator=(const TelemetryServer&) = delete;

    // Blocks until stop(); throws Error when the port cannot be bound.
    void listen(const std::string& host, int port);
    // Binds an ephemeral port and serves on a background thread (tests).
    int listen_on_any_port(const std::string& host);

    bool wait_until_ready(int timeout_ms = 2000);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pondwatch

#endif
