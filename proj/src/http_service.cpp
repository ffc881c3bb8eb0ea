#include "pondwatch/http_service.hpp"

#include <thread>

#include <httplib.h>

#include "pondwatch/feed_export.hpp"

namespace pondwatch {
namespace {

ReadOptions options_from_request(const httplib::Request& req) {
    ReadOptions options;
    if (req.has_param("results")) {
        const std::string raw = req.get_param_value("results");
        try {
            options.results = static_cast<std::size_t>(std::stoull(raw));
        } catch (const std::exception&) {
            throw ValidationError("bad results parameter: " + raw);
        }
    }
    for (const char* name : {"start", "end"}) {
        if (!req.has_param(name)) continue;
        const std::string raw = req.get_param_value(name);
        const auto parsed = parse_timestamp(raw);
        if (!parsed) throw ValidationError(std::string("bad timestamp: ") + raw);
        if (std::string_view(name) == "start") options.start = *parsed;
        else options.end = *parsed;
    }
    return options;
}

}  // namespace

struct TelemetryServer::Impl {
    ChannelStore& store;
    httplib::Server server;
    std::thread worker;

    explicit Impl(ChannelStore& s) : store(s) { bind_routes(); }

    ~Impl() {
        server.stop();
        if (worker.joinable()) worker.join();
    }

    void handle_update(const httplib::Request& req, httplib::Response& res) {
        try {
            const std::string key = req.get_param_value("api_key");
            std::map<std::size_t, double> values;
            for (std::size_t f = 1; f <= kMaxChannelFields; ++f) {
                const std::string name = "field" + std::to_string(f);
                if (!req.has_param(name)) continue;
                const auto value = parse_double(req.get_param_value(name));
                if (!value) throw ValidationError("bad number in " + name);
                values[f] = *value;
            }
            std::optional<UnixTime> timestamp;
            if (req.has_param("created_at")) {
                timestamp = parse_timestamp(req.get_param_value("created_at"));
                if (!timestamp) throw ValidationError("bad created_at");
            }
            if (key.empty()) throw AuthError("missing api_key");
            const std::int64_t entry_id = store.write_update(key, values, timestamp);
            res.status = 200;
            res.set_content(std::to_string(entry_id), "text/plain");
        } catch (const AuthError&) {
            res.status = 401;
            res.set_content("0", "text/plain");
        } catch (const ValidationError&) {
            res.status = 400;
            res.set_content("0", "text/plain");
        }
    }

    void handle_feed(const httplib::Request& req, httplib::Response& res,
                     std::optional<std::size_t> field) {
        try {
            const std::int64_t channel_id = std::stoll(req.matches[1].str());
            const std::string extension =
                field ? req.matches[3].str() : req.matches[2].str();
            const auto format = parse_feed_format(extension);
            if (!format) throw ValidationError("unknown export format: " + extension);

            ReadOptions options = options_from_request(req);
            options.field = field;
            const Channel channel = store.channel(channel_id);
            const auto entries = store.read_feed(channel_id, options);
            res.status = 200;
            res.set_content(export_feed(channel, entries, *format),
                            std::string(feed_format_content_type(*format)));
        } catch (const NotFoundError& e) {
            res.status = 404;
            res.set_content(e.what(), "text/plain");
        } catch (const ValidationError& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        }
    }

    void bind_routes() {
        server.Post("/update", [this](const httplib::Request& req, httplib::Response& res) {
            handle_update(req, res);
        });
        server.Get(R"(/channels/(\d+)/feeds\.([A-Za-z]+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       handle_feed(req, res, std::nullopt);
                   });
        server.Get(R"(/channels/(\d+)/fields/(\d+)\.([A-Za-z]+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       handle_feed(req, res, std::stoull(req.matches[2].str()));
                   });
        server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            res.status = 200;
            res.set_content("ok", "text/plain");
        });
    }
};

TelemetryServer::TelemetryServer(ChannelStore& store) : impl_(std::make_unique<Impl>(store)) {}

TelemetryServer::~TelemetryServer() = default;

void TelemetryServer::listen(const std::string& host, int port) {
    if (!impl_->server.bind_to_port(host, port)) {
        throw Error("cannot bind " + host + ":" + std::to_string(port));
    }
    impl_->server.listen_after_bind();
}

int TelemetryServer::listen_on_any_port(const std::string& host) {
    const int port = impl_->server.bind_to_any_port(host);
    if (port < 0) throw Error("cannot bind an ephemeral port on " + host);
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    return port;
}

bool TelemetryServer::wait_until_ready(int timeout_ms) {
    for (int waited = 0; waited < timeout_ms; waited += 10) {
        if (impl_->server.is_running()) return true;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    return impl_->server.is_running();
}

void TelemetryServer::stop() { impl_->server.stop(); }

}  // namespace pondwatch
