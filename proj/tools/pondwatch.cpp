// pondwatch: sensor simulation, telemetry service, pond verdicts and
// classifier evaluation behind one executable.
//
// Exit codes: 0 success, 2 usage error, 1 anything else.
#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pondwatch/channel_store.hpp"
#include "pondwatch/feed_export.hpp"
#include "pondwatch/fixtures.hpp"
#include "pondwatch/http_service.hpp"
#include "pondwatch/metrics.hpp"
#include "pondwatch/ml/folds.hpp"
#include "pondwatch/ml/model_io.hpp"
#include "pondwatch/sensors.hpp"
#include "pondwatch/suitability.hpp"

namespace pw = pondwatch;
using nlohmann::json;

namespace {

// Flag combinations the parser cannot reject on its own.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw pw::Error("cannot write " + path);
    out << content;
    if (!out) throw pw::Error("failed writing " + path);
}

std::string read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pw::Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// The field order cmd_simulate emits and cmd_verdict expects by default.
const std::vector<std::string> kSimFieldLabels = {"Turbidity", "Temperature", "PH", "Depth",
                                                  "Conductivity"};
constexpr pw::Parameter kSimFieldParameters[] = {
    pw::Parameter::TurbidityNtu, pw::Parameter::TemperatureC, pw::Parameter::Ph,
    pw::Parameter::DepthM, pw::Parameter::ConductivityUsCm};

pw::PondProfile profile_from_json_file(const std::string& path) {
    json doc = json::parse(read_input(path));
    auto interval = [&doc](const char* key) {
        return pw::Interval{doc.at(key).at(0).get<double>(), doc.at(key).at(1).get<double>()};
    };
    pw::PondProfile profile;
    profile.pond_id = doc.value("pond_id", 0);
    profile.length_m = doc.value("length_m", 0.0);
    profile.width_m = doc.value("width_m", 0.0);
    profile.depth_range_m = interval("depth_m");
    profile.ph = interval("ph");
    profile.temperature_c = interval("temperature");
    profile.turbidity_ntu = interval("turbidity");
    profile.conductivity_us_cm = interval("conductivity");
    return profile;
}

struct SimulateOptions {
    int pond = 0;
    std::string profile_path;
    std::int64_t duration = 3000;
    std::int64_t interval = 150;
    std::int64_t warmup = 180;
    std::uint64_t seed = 1;
    std::string start_time = "2020-12-20T20:50:00Z";
    std::string out;
    std::string post_url;
    std::string api_key;
};

std::vector<pw::FeedEntry> simulate_feed(const SimulateOptions& opt) {
    pw::PondProfile profile;
    if (!opt.profile_path.empty()) {
        profile = profile_from_json_file(opt.profile_path);
    } else if (opt.pond >= 1) {
        profile = pw::built_in_profile(opt.pond);
    } else {
        throw UsageError("simulate needs --pond or --profile");
    }

    const auto start = pw::parse_timestamp(opt.start_time);
    if (!start) throw UsageError("bad --start-time: " + opt.start_time);

    // The warm-up window is generated on top of the requested duration and
    // then dropped, so --duration is the retained session length.
    const auto samples =
        pw::simulate_pond_stream(profile, opt.warmup + opt.duration, opt.interval, opt.seed);

    std::map<std::int64_t, pw::FeedEntry> by_tick;
    for (const pw::ReadingSample& sample : samples) {
        pw::FeedEntry& entry = by_tick[sample.timestamp_s];
        entry.created_at = *start + sample.timestamp_s;
        if (entry.values.empty()) entry.values.assign(kSimFieldLabels.size(), std::nullopt);
        for (std::size_t f = 0; f < std::size(kSimFieldParameters); ++f) {
            if (kSimFieldParameters[f] == sample.parameter) entry.values[f] = sample.value;
        }
    }
    std::vector<pw::FeedEntry> entries;
    for (auto& [tick, entry] : by_tick) entries.push_back(std::move(entry));
    entries = pw::stabilization_filter(std::move(entries), opt.warmup);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].entry_id = static_cast<std::int64_t>(i) + 1;
    }
    return entries;
}

int cmd_simulate(const SimulateOptions& opt) {
    const auto entries = simulate_feed(opt);

    pw::Channel channel;
    channel.channel_id = opt.pond >= 1 ? opt.pond : 0;
    channel.name = "Pond " + std::to_string(channel.channel_id) + " simulation";
    channel.field_labels = kSimFieldLabels;
    channel.created_at = entries.empty() ? 0 : entries.front().created_at;
    write_output(opt.out, pw::export_feed(channel, entries, pw::FeedFormat::Csv));

    if (!opt.post_url.empty()) {
        if (opt.api_key.empty()) throw UsageError("--post needs --api-key");
        httplib::Client client(opt.post_url);
        client.set_connection_timeout(5, 0);
        for (const pw::FeedEntry& entry : entries) {
            httplib::Params params{{"api_key", opt.api_key}};
            for (std::size_t f = 0; f < entry.values.size(); ++f) {
                if (entry.values[f]) {
                    params.emplace("field" + std::to_string(f + 1),
                                   pw::format_double(*entry.values[f]));
                }
            }
            params.emplace("created_at", pw::format_iso8601(entry.created_at));
            auto res = client.Post("/update", params);
            if (!res || res->status != 200) {
                throw pw::Error("posting to " + opt.post_url + " failed" +
                                (res ? " with status " + std::to_string(res->status) : ""));
            }
        }
        std::cerr << "posted " << entries.size() << " updates to " << opt.post_url << "\n";
    }
    return 0;
}

std::atomic<pw::TelemetryServer*> g_server{nullptr};

void handle_signal(int) {
    if (auto* server = g_server.load()) server->stop();
}

struct ServeOptions {
    std::string host = "0.0.0.0";
    int port = 8080;
    std::string data_dir;
};

int cmd_serve(const ServeOptions& opt) {
    std::string data_dir = opt.data_dir;
    if (data_dir.empty()) data_dir = "pondwatch-data";

    pw::ChannelStore store(data_dir);
    if (store.empty()) {
        const pw::Channel channel =
            store.create_channel("Fish Farm Monitoring System", pw::default_field_labels());
        std::cout << "created channel " << channel.channel_id << " (write key "
                  << channel.write_key << ")\n";
    }
    for (const pw::Channel& channel : store.channels()) {
        std::cout << "channel " << channel.channel_id << ": " << channel.name << "\n";
    }

    pw::TelemetryServer server(store);
    g_server.store(&server);
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cout << "serving on http://" << opt.host << ":" << opt.port << " (data: " << data_dir
              << ")\n";
    server.listen(opt.host, opt.port);
    g_server.store(nullptr);
    return 0;
}

// Minimal parser for the feed CSV this tool exports.
std::pair<std::size_t, std::vector<pw::FeedEntry>> parse_feed_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw pw::ValidationError("empty feed file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t fields = 0;
    {
        std::istringstream header(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(header, cell, ',')) cells.push_back(cell);
        if (cells.size() < 3 || cells[0] != "created_at" || cells[1] != "entry_id") {
            throw pw::ValidationError("not a feed CSV (expected created_at,entry_id,field1,...)");
        }
        fields = cells.size() - 2;
    }
    std::vector<pw::FeedEntry> entries;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        pw::FeedEntry entry;
        std::getline(cells, cell, ',');
        const auto ts = pw::parse_timestamp(cell);
        if (!ts) throw pw::ValidationError("bad timestamp in feed: " + cell);
        entry.created_at = *ts;
        std::getline(cells, cell, ',');
        entry.entry_id = std::stoll(cell);
        for (std::size_t f = 0; f < fields; ++f) {
            if (!std::getline(cells, cell, ',')) cell.clear();
            if (cell.empty()) {
                entry.values.push_back(std::nullopt);
            } else {
                const auto value = pw::parse_double(cell);
                if (!value) throw pw::ValidationError("bad number in feed: " + cell);
                entry.values.push_back(*value);
            }
        }
        entries.push_back(std::move(entry));
    }
    return {fields, std::move(entries)};
}

struct VerdictOptions {
    bool fixtures = false;
    std::string input;
    std::string url;
    int pond = 0;
    std::string fields_csv = "turbidity,temperature,ph,depth,conductivity";
    std::string depth;  // "lo:hi" override
    std::int64_t warmup = 0;
    double threshold = 0.70;
    std::string format = "text";
    std::string out;
};

std::map<pw::Parameter, std::vector<double>> samples_from_entries(
    const std::vector<pw::FeedEntry>& entries, const std::vector<pw::Parameter>& field_map) {
    std::map<pw::Parameter, std::vector<double>> samples;
    for (const pw::FeedEntry& entry : entries) {
        for (std::size_t f = 0; f < entry.values.size() && f < field_map.size(); ++f) {
            if (entry.values[f]) samples[field_map[f]].push_back(*entry.values[f]);
        }
    }
    return samples;
}

int cmd_verdict(const VerdictOptions& opt) {
    pw::SuitabilityConfig config;
    config.pass_threshold = opt.threshold;

    std::vector<pw::PondVerdict> verdicts;
    if (opt.fixtures) {
        verdicts = pw::evaluate_fixture_ponds(config);
    } else if (!opt.input.empty() || !opt.url.empty()) {
        std::vector<pw::FeedEntry> entries;
        std::vector<pw::Parameter> field_map;
        if (!opt.input.empty()) {
            auto [fields, parsed] = parse_feed_csv(read_input(opt.input));
            entries = std::move(parsed);
            std::istringstream names(opt.fields_csv);
            std::string name;
            while (std::getline(names, name, ',')) {
                const auto parameter = pw::parse_parameter(name);
                if (!parameter) throw UsageError("unknown parameter in --fields: " + name);
                field_map.push_back(*parameter);
            }
            if (field_map.size() < fields) field_map.resize(fields, pw::Parameter::Ph);
        } else {
            httplib::Client client(opt.url);
            client.set_connection_timeout(5, 0);
            auto res = client.Get("/feeds.json?results=8000");
            if (!res || res->status != 200) throw pw::Error("cannot fetch " + opt.url);
            json doc = json::parse(res->body);
            const json& channel = doc.at("channel");
            for (std::size_t f = 1; f <= pw::kMaxChannelFields; ++f) {
                const std::string key = "field" + std::to_string(f);
                if (!channel.contains(key)) break;
                std::string label = channel.at(key).get<std::string>();
                for (char& c : label) c = static_cast<char>(std::tolower(c));
                const auto parameter = pw::parse_parameter(label);
                field_map.push_back(parameter.value_or(pw::Parameter::Ph));
            }
            for (const json& feed : doc.at("feeds")) {
                pw::FeedEntry entry;
                entry.created_at = pw::parse_timestamp(feed.at("created_at").get<std::string>())
                                       .value_or(0);
                entry.entry_id = feed.at("entry_id").get<std::int64_t>();
                for (std::size_t f = 1; f <= field_map.size(); ++f) {
                    const json& v = feed.at("field" + std::to_string(f));
                    if (v.is_null()) entry.values.push_back(std::nullopt);
                    else entry.values.push_back(v.get<double>());
                }
                entries.push_back(std::move(entry));
            }
        }
        if (opt.warmup > 0) entries = pw::stabilization_filter(std::move(entries), opt.warmup);
        if (entries.empty()) throw pw::ValidationError("no entries in input");

        auto samples = samples_from_entries(entries, field_map);
        pw::Interval depth_range;
        if (!opt.depth.empty()) {
            const auto colon = opt.depth.find(':');
            if (colon == std::string::npos) throw UsageError("--depth expects lo:hi");
            const auto lo = pw::parse_double(opt.depth.substr(0, colon));
            const auto hi = pw::parse_double(opt.depth.substr(colon + 1));
            if (!lo || !hi) throw UsageError("--depth expects lo:hi");
            depth_range = {*lo, *hi};
        } else if (samples.count(pw::Parameter::DepthM) &&
                   !samples[pw::Parameter::DepthM].empty()) {
            const auto summary = pw::summarize_readings(samples[pw::Parameter::DepthM]);
            depth_range = {summary.min, summary.max};
        } else if (opt.pond >= 1) {
            depth_range = pw::built_in_profile(opt.pond).depth_range_m;
        } else {
            throw UsageError("no depth data; pass --depth lo:hi or --pond");
        }
        samples.erase(pw::Parameter::DepthM);
        verdicts.push_back(pw::evaluate_pond(opt.pond, samples, depth_range, config));
    } else {
        throw UsageError("verdict needs --fixtures, --input or --url");
    }

    if (opt.format == "json") {
        write_output(opt.out, pw::verdict_json(verdicts));
    } else {
        write_output(opt.out, pw::verdict_table_text(verdicts));
    }
    return 0;
}

struct EvaluateOptions {
    std::string dataset_path;
    std::size_t synthetic = 0;
    double noise = 0.0;
    std::string species = "disjoint";
    std::string algos = "all";
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::string format = "text";
    std::string out;          // directory for per-model reports + ranking
    std::string save_models;  // directory for full-data model files
    pw::ml::TrainerConfig trainer;
};

std::vector<pw::ml::Algorithm> parse_algo_list(const std::string& spec) {
    if (spec == "all") return pw::ml::all_algorithms();
    std::vector<pw::ml::Algorithm> algos;
    std::istringstream in(spec);
    std::string tag;
    while (std::getline(in, tag, ',')) {
        const auto algorithm = pw::ml::parse_algorithm(tag);
        if (!algorithm) {
            std::string valid;
            for (pw::ml::Algorithm a : pw::ml::all_algorithms()) {
                if (!valid.empty()) valid += ", ";
                valid += std::string(pw::ml::algorithm_tag(a));
            }
            throw UsageError("unknown algorithm '" + tag + "' (valid: " + valid + ", rf, all)");
        }
        algos.push_back(*algorithm);
    }
    if (algos.empty()) throw UsageError("--algo names no algorithms");
    return algos;
}

int cmd_evaluate(const EvaluateOptions& opt) {
    pw::Dataset dataset;
    if (!opt.dataset_path.empty()) {
        dataset = pw::load_dataset_csv(opt.dataset_path);
    } else if (opt.synthetic > 0) {
        pw::SpeciesConfig config;
        if (opt.species == "paper") config = pw::paper_species_config();
        else if (opt.species == "grid") config = pw::grid_species_config();
        else config = pw::disjoint_species_config();
        dataset = pw::generate_labeled_dataset(opt.synthetic, opt.seed, config, opt.noise);
    } else {
        throw UsageError("evaluate needs --dataset or --synthetic");
    }

    const auto algos = parse_algo_list(opt.algos);

    if (!opt.out.empty()) std::filesystem::create_directories(opt.out);
    if (!opt.save_models.empty()) std::filesystem::create_directories(opt.save_models);

    std::vector<pw::Report> reports;
    for (pw::ml::Algorithm algorithm : algos) {
        const auto cm =
            pw::ml::cross_validate(algorithm, dataset, opt.folds, opt.seed, opt.trainer);
        pw::Report report = pw::make_report(std::string(pw::ml::algorithm_tag(algorithm)), cm);
        if (!opt.out.empty()) {
            const auto base = std::filesystem::path(opt.out) / report.algorithm;
            write_output(base.string() + ".report.json", pw::report_json(report));
            write_output(base.string() + ".report.txt", pw::report_text(report));
        } else if (opt.format == "json") {
            std::cout << pw::report_json(report);
        } else {
            std::cout << pw::report_text(report) << "\n";
        }
        if (!opt.save_models.empty()) {
            const auto model = pw::ml::train_model(algorithm, dataset, opt.trainer, opt.seed);
            pw::ml::save_model(*model,
                               (std::filesystem::path(opt.save_models) /
                                (report.algorithm + ".model.json"))
                                   .string());
        }
        reports.push_back(std::move(report));
    }

    const auto ranked = pw::rank_models(reports);
    const std::string table = pw::ranking_table_text(ranked);
    if (!opt.out.empty()) {
        write_output((std::filesystem::path(opt.out) / "ranking.txt").string(), table);
    }
    std::cout << table;
    return 0;
}

struct ExportReportOptions {
    std::string input;
    bool fixtures = false;
    std::string format = "text";
    std::string out;
};

int cmd_export_report(const ExportReportOptions& opt) {
    if (opt.fixtures) {
        write_output(opt.out, pw::fixtures::to_csv());
        return 0;
    }
    if (opt.input.empty()) throw UsageError("export-report needs --input or --fixtures");
    const pw::Report report = pw::report_from_json(read_input(opt.input));
    if (opt.format == "json") write_output(opt.out, pw::report_json(report));
    else write_output(opt.out, pw::report_text(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pondwatch: aquaculture telemetry, pond suitability and fish classification"};
    app.require_subcommand(1);
    app.set_config("--config-file", "", "key=value config file; flags take precedence");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "generate a sensor feed CSV");
    simulate->add_option("--pond", sim.pond, "built-in pond id (1-5)");
    simulate->add_option("--profile", sim.profile_path, "pond profile JSON file");
    simulate->add_option("--duration", sim.duration, "retained session length, seconds")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--interval", sim.interval, "sampling interval, seconds")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--warmup", sim.warmup, "discarded warm-up, seconds")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--seed", sim.seed, "stream seed");
    simulate->add_option("--start-time", sim.start_time, "feed start timestamp (ISO-8601 UTC)");
    simulate->add_option("--out", sim.out, "output file (default stdout)");
    simulate->add_option("--post", sim.post_url, "also POST rows to a running service");
    simulate->add_option("--api-key", sim.api_key, "write key for --post");

    ServeOptions srv;
    auto* serve = app.add_subcommand("serve", "run the telemetry HTTP service");
    serve->add_option("--host", srv.host, "bind address");
    serve->add_option("--port", srv.port, "TCP port");
    serve->add_option("--data-dir", srv.data_dir, "storage root")
        ->envname("PONDWATCH_DATA_DIR");

    VerdictOptions ver;
    auto* verdict = app.add_subcommand("verdict", "judge pond suitability");
    verdict->add_flag("--fixtures", ver.fixtures, "use the embedded field data for ponds 1-5");
    verdict->add_option("--input", ver.input, "feed CSV to judge");
    verdict->add_option("--url", ver.url, "live channel URL, e.g. http://host:port/channels/1");
    verdict->add_option("--pond", ver.pond, "pond id for reports and built-in depth");
    verdict->add_option("--fields", ver.fields_csv,
                        "parameter per CSV field, comma separated");
    verdict->add_option("--depth", ver.depth, "static depth range lo:hi in meters");
    verdict->add_option("--warmup", ver.warmup, "drop entries earlier than first+warmup s");
    verdict->add_option("--threshold", ver.threshold, "in-range fraction needed to pass");
    verdict->add_option("--format", ver.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    verdict->add_option("--out", ver.out, "output file (default stdout)");

    EvaluateOptions ev;
    auto* evaluate = app.add_subcommand("evaluate", "cross-validate classifiers");
    evaluate->add_option("--dataset", ev.dataset_path, "labeled dataset CSV");
    evaluate->add_option("--synthetic", ev.synthetic, "generate n labeled instances");
    evaluate->add_option("--noise", ev.noise, "feature noise sigma as fraction of envelope");
    evaluate->add_option("--species", ev.species, "synthetic species config")
        ->check(CLI::IsMember({"disjoint", "grid", "paper"}));
    evaluate->add_option("--algo", ev.algos, "comma list of algorithms, or 'all'");
    evaluate->add_option("--folds", ev.folds, "cross-validation folds");
    evaluate->add_option("--seed", ev.seed, "seed for folds, generators and trainers");
    evaluate->add_option("--format", ev.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    evaluate->add_option("--out", ev.out, "directory for per-model reports and ranking");
    evaluate->add_option("--save-models", ev.save_models,
                         "directory for models trained on the full dataset");
    evaluate->add_option("--knn-k", ev.trainer.knn.k_neighbors, "KNN neighbor count");
    evaluate->add_option("--j48-confidence", ev.trainer.j48.confidence, "J48 pruning confidence");
    evaluate->add_option("--j48-min-leaf", ev.trainer.j48.min_leaf, "J48 minimum leaf size");
    evaluate->add_flag("--j48-unpruned", ev.trainer.j48.unpruned, "disable J48 pruning");
    evaluate->add_option("--rf-trees", ev.trainer.forest.n_trees, "forest size");
    evaluate->add_option("--rf-features", ev.trainer.forest.features_per_split,
                         "features sampled per split (0 = log2(F)+1)");
    evaluate->add_option("--reptree-prune-fraction", ev.trainer.reptree.prune_fraction,
                         "held-out fraction for reduced-error pruning");
    evaluate->add_option("--table-bins", ev.trainer.table.bins, "decision table bins");
    evaluate->add_option("--boost-iterations", ev.trainer.boost.iterations,
                         "LogitBoost rounds");

    ExportReportOptions ex;
    auto* export_report = app.add_subcommand("export-report", "re-render a saved report");
    export_report->add_option("--input", ex.input, "report JSON produced by evaluate");
    export_report->add_flag("--fixtures", ex.fixtures,
                            "emit the embedded fixture data as CSV instead");
    export_report->add_option("--format", ex.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    export_report->add_option("--out", ex.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (serve->parsed()) return cmd_serve(srv);
        if (verdict->parsed()) return cmd_verdict(ver);
        if (evaluate->parsed()) return cmd_evaluate(ev);
        if (export_report->parsed()) return cmd_export_report(ex);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
