#include <doctest.h>

#include <filesystem>
#include <set>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pondwatch/http_service.hpp"

using namespace pondwatch;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pondwatch-http-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct RunningServer {
    ChannelStore& store;
    TelemetryServer server;
    int port;

    explicit RunningServer(ChannelStore& s) : store(s), server(s) {
        port = server.listen_on_any_port("127.0.0.1");
        REQUIRE(server.wait_until_ready());
    }
    ~RunningServer() { server.stop(); }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_connection_timeout(5, 0);
        return c;
    }
};

}  // namespace

TEST_CASE("healthz responds") {
    ChannelStore store;
    RunningServer running(store);
    auto res = running.client().Get("/healthz");
    REQUIRE(res);
    CHECK(res->status == 200);
}

TEST_CASE("update endpoint: success, auth failure, validation failure") {
    ChannelStore store;
    const Channel channel = store.create_channel("c", default_field_labels());
    RunningServer running(store);
    auto client = running.client();

    auto ok = client.Post("/update?api_key=" + channel.write_key + "&field1=3.56&field3=7.67");
    REQUIRE(ok);
    CHECK(ok->status == 200);
    CHECK(ok->body == "1");

    auto second = client.Post("/update?api_key=" + channel.write_key + "&field2=17.5");
    REQUIRE(second);
    CHECK(second->body == "2");

    auto bad_key = client.Post("/update?api_key=WRONG&field1=1");
    REQUIRE(bad_key);
    CHECK(bad_key->status == 401);
    CHECK(bad_key->body == "0");

    auto no_fields = client.Post("/update?api_key=" + channel.write_key);
    REQUIRE(no_fields);
    CHECK(no_fields->status == 400);
    CHECK(no_fields->body == "0");

    auto bad_number = client.Post("/update?api_key=" + channel.write_key + "&field1=abc");
    REQUIRE(bad_number);
    CHECK(bad_number->status == 400);
    CHECK(bad_number->body == "0");

    // Form-encoded body works too.
    httplib::Params params{{"api_key", channel.write_key}, {"field4", "1.5"}};
    auto form = client.Post("/update", params);
    REQUIRE(form);
    CHECK(form->body == "3");
}

TEST_CASE("feed endpoints: formats, field projection, window, errors") {
    ChannelStore store;
    const Channel channel = store.create_channel("Fish Farm Monitoring System",
                                                 default_field_labels());
    store.write_update(channel.write_key, {{1, 3.56}, {3, 7.67}},
                       parse_timestamp("2020-12-20T20:50:00Z"));
    store.write_update(channel.write_key, {{1, 3.55}},
                       parse_timestamp("2020-12-20T20:52:30Z"));
    RunningServer running(store);
    auto client = running.client();
    const std::string base = "/channels/" + std::to_string(channel.channel_id);

    auto csv = client.Get(base + "/feeds.csv");
    REQUIRE(csv);
    CHECK(csv->status == 200);
    CHECK(csv->get_header_value("Content-Type") == "text/csv");
    CHECK(csv->body.find("created_at,entry_id,field1,field2,field3,field4") == 0);
    CHECK(csv->body.find("2020-12-20T20:50:00Z,1,3.56,,7.67,") != std::string::npos);

    auto json_res = client.Get(base + "/feeds.json?results=1");
    REQUIRE(json_res);
    const auto doc = nlohmann::json::parse(json_res->body);
    CHECK(doc.at("feeds").size() == 1);
    CHECK(doc.at("feeds")[0].at("entry_id") == 2);

    auto xml_res = client.Get(base + "/feeds.xml");
    REQUIRE(xml_res);
    CHECK(xml_res->body.find("<channel>") != std::string::npos);
    CHECK(xml_res->body.find("<field1>Turbidity</field1>") != std::string::npos);

    auto field3 = client.Get(base + "/fields/3.csv");
    REQUIRE(field3);
    std::istringstream lines(field3->body);
    std::string header, row1;
    std::getline(lines, header);
    std::getline(lines, row1);
    CHECK(row1 == "2020-12-20T20:50:00Z,1,,,7.67,");

    auto windowed = client.Get(base + "/feeds.json?start=2020-12-20T20:51:00Z");
    REQUIRE(windowed);
    CHECK(nlohmann::json::parse(windowed->body).at("feeds").size() == 1);

    auto missing = client.Get("/channels/999/feeds.csv");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    auto bad_format = client.Get(base + "/feeds.pdf");
    REQUIRE(bad_format);
    CHECK(bad_format->status == 400);

    auto bad_results = client.Get(base + "/feeds.csv?results=notanumber");
    REQUIRE(bad_results);
    CHECK(bad_results->status == 400);
}

TEST_CASE("concurrent HTTP writers yield dense ids and restart keeps them") {
    TempDir dir;
    std::string key;
    std::int64_t channel_id = 0;
    constexpr int kWriters = 10;
    constexpr int kWritesEach = 10;
    {
        ChannelStore store(dir.path.string());
        const Channel channel = store.create_channel("c", {"A"});
        key = channel.write_key;
        channel_id = channel.channel_id;
        RunningServer running(store);

        std::vector<std::thread> writers;
        std::vector<std::set<std::string>> responses(kWriters);
        for (int w = 0; w < kWriters; ++w) {
            writers.emplace_back([&, w] {
                auto client = running.client();
                for (int i = 0; i < kWritesEach; ++i) {
                    auto res =
                        client.Post("/update?api_key=" + key + "&field1=" + std::to_string(i));
                    if (res && res->status == 200) responses[w].insert(res->body);
                }
            });
        }
        for (auto& t : writers) t.join();

        std::set<int> ids;
        for (const auto& chunk : responses) {
            for (const std::string& body : chunk) ids.insert(std::stoi(body));
        }
        CHECK(ids.size() == kWriters * kWritesEach);
        CHECK(*ids.begin() == 1);
        CHECK(*ids.rbegin() == kWriters * kWritesEach);
    }
    // Restart on the same directory: every acknowledged write is back.
    {
        ChannelStore store(dir.path.string());
        RunningServer running(store);
        auto res = running.client().Get("/channels/" + std::to_string(channel_id) +
                                        "/feeds.json?results=8000");
        REQUIRE(res);
        const auto doc = nlohmann::json::parse(res->body);
        CHECK(doc.at("feeds").size() == kWriters * kWritesEach);
    }
}
