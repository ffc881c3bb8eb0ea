#include "pondwatch/channel_store.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

namespace pondwatch {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fresh_write_key() {
    static const char alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    std::random_device rd;
    std::mt19937_64 gen(static_cast<std::uint64_t>(rd()) ^
                        static_cast<std::uint64_t>(now_utc()));
    std::string key;
    for (int i = 0; i < 16; ++i) key += alphabet[gen() % (sizeof(alphabet) - 1)];
    return key;
}

json entry_to_json(const FeedEntry& entry) {
    json values = json::array();
    for (const auto& v : entry.values) {
        if (v) values.push_back(*v);
        else values.push_back(nullptr);
    }
    return json{{"entry_id", entry.entry_id},
                {"created_at", entry.created_at},
                {"values", std::move(values)}};
}

FeedEntry entry_from_json(const json& doc) {
    FeedEntry entry;
    entry.entry_id = doc.at("entry_id").get<std::int64_t>();
    entry.created_at = doc.at("created_at").get<UnixTime>();
    for (const json& v : doc.at("values")) {
        if (v.is_null()) entry.values.push_back(std::nullopt);
        else entry.values.push_back(v.get<double>());
    }
    return entry;
}

}  // namespace

std::vector<std::string> default_field_labels() {
    return {"Turbidity", "Temperature", "PH", "Depth"};
}

std::vector<FeedEntry> stabilization_filter(std::vector<FeedEntry> entries,
                                            std::int64_t warmup_s,
                                            std::optional<UnixTime> session_start) {
    if (entries.empty() || warmup_s <= 0) return entries;
    const UnixTime cutoff = session_start.value_or(entries.front().created_at) + warmup_s;
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [cutoff](const FeedEntry& e) { return e.created_at < cutoff; }),
                  entries.end());
    return entries;
}

struct ChannelStore::ChannelState {
    Channel meta;
    mutable std::mutex mutex;  // serializes appends; readers copy under it
    std::vector<FeedEntry> entries;
    std::ofstream log;  // open in append mode when persistence is on

    std::string log_path(const std::string& data_dir) const {
        return (fs::path(data_dir) / ("feed_" + std::to_string(meta.channel_id) + ".ndjson"))
            .string();
    }
};

ChannelStore::ChannelStore(std::string data_dir) : data_dir_(std::move(data_dir)) {
    if (!data_dir_.empty()) {
        std::error_code ec;
        fs::create_directories(data_dir_, ec);
        if (ec || !fs::is_directory(data_dir_)) {
            throw Error("cannot create data directory: " + data_dir_);
        }
        load();
    }
}

ChannelStore::~ChannelStore() = default;

void ChannelStore::load() {
    const fs::path meta_path = fs::path(data_dir_) / "channels.ndjson";
    if (fs::exists(meta_path)) {
        std::ifstream in(meta_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json doc = json::parse(line);
            auto state = std::make_unique<ChannelState>();
            state->meta.channel_id = doc.at("channel_id").get<std::int64_t>();
            state->meta.name = doc.at("name").get<std::string>();
            state->meta.field_labels = doc.at("field_labels").get<std::vector<std::string>>();
            state->meta.write_key = doc.at("write_key").get<std::string>();
            state->meta.created_at = doc.at("created_at").get<UnixTime>();
            next_channel_id_ = std::max(next_channel_id_, state->meta.channel_id + 1);
            channels_[state->meta.channel_id] = std::move(state);
        }
    }
    for (auto& [id, state] : channels_) {
        const std::string path = state->log_path(data_dir_);
        if (fs::exists(path)) {
            std::ifstream in(path);
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                state->entries.push_back(entry_from_json(json::parse(line)));
            }
        }
        state->log.open(path, std::ios::app);
    }
}

void ChannelStore::persist_channel_meta(const Channel& channel) {
    if (data_dir_.empty()) return;
    const fs::path meta_path = fs::path(data_dir_) / "channels.ndjson";
    std::ofstream out(meta_path, std::ios::app);
    json doc{{"channel_id", channel.channel_id},
             {"name", channel.name},
             {"field_labels", channel.field_labels},
             {"write_key", channel.write_key},
             {"created_at", channel.created_at}};
    out << doc.dump() << '\n';
    out.flush();
}

Channel ChannelStore::create_channel(const std::string& name,
                                     std::vector<std::string> field_labels) {
    if (field_labels.empty()) throw ValidationError("a channel needs at least one field label");
    if (field_labels.size() > kMaxChannelFields) {
        throw ValidationError("a channel supports at most 8 fields");
    }

    std::unique_lock lock(mutex_);
    auto state = std::make_unique<ChannelState>();
    state->meta.channel_id = next_channel_id_++;
    state->meta.name = name;
    state->meta.field_labels = std::move(field_labels);
    state->meta.created_at = now_utc();
    do {
        state->meta.write_key = fresh_write_key();
    } while (std::any_of(channels_.begin(), channels_.end(), [&](const auto& kv) {
        return kv.second->meta.write_key == state->meta.write_key;
    }));

    if (!data_dir_.empty()) state->log.open(state->log_path(data_dir_), std::ios::app);
    Channel created = state->meta;
    channels_[created.channel_id] = std::move(state);
    persist_channel_meta(created);
    return created;
}

ChannelStore::ChannelState& ChannelStore::state_for_key(const std::string& write_key) {
    std::shared_lock lock(mutex_);
    for (auto& [id, state] : channels_) {
        if (state->meta.write_key == write_key) return *state;
    }
    throw AuthError("unknown write key");
}

const ChannelStore::ChannelState& ChannelStore::state_for_id(std::int64_t channel_id) const {
    std::shared_lock lock(mutex_);
    auto it = channels_.find(channel_id);
    if (it == channels_.end()) {
        throw NotFoundError("unknown channel " + std::to_string(channel_id));
    }
    return *it->second;
}

std::int64_t ChannelStore::write_update(const std::string& write_key,
                                        const std::map<std::size_t, double>& field_values,
                                        std::optional<UnixTime> timestamp) {
    ChannelState& state = state_for_key(write_key);
    if (field_values.empty()) throw ValidationError("update carries no field values");
    const std::size_t fields = state.meta.field_labels.size();
    for (const auto& [index, value] : field_values) {
        if (index < 1 || index > fields) {
            throw ValidationError("field index " + std::to_string(index) +
                                  " outside 1.." + std::to_string(fields));
        }
        if (!std::isfinite(value)) throw ValidationError("field values must be finite");
    }

    FeedEntry entry;
    entry.created_at = timestamp.value_or(now_utc());
    entry.values.assign(fields, std::nullopt);
    for (const auto& [index, value] : field_values) entry.values[index - 1] = value;

    std::lock_guard lock(state.mutex);
    entry.entry_id = static_cast<std::int64_t>(state.entries.size()) + 1;
    if (state.log.is_open()) {
        state.log << entry_to_json(entry).dump() << '\n';
        state.log.flush();
        if (!state.log) throw Error("feed log write failed");
    }
    state.entries.push_back(entry);
    return entry.entry_id;
}

std::vector<FeedEntry> ChannelStore::read_feed(std::int64_t channel_id,
                                               const ReadOptions& options) const {
    const ChannelState& state = state_for_id(channel_id);
    const std::size_t cap = std::min<std::size_t>(options.results == 0 ? 100 : options.results,
                                                  8000);

    std::vector<FeedEntry> snapshot;
    {
        std::lock_guard lock(state.mutex);
        snapshot = state.entries;
    }

    std::vector<FeedEntry> window;
    for (FeedEntry& entry : snapshot) {
        if (options.start && entry.created_at < *options.start) continue;
        if (options.end && entry.created_at > *options.end) continue;
        window.push_back(std::move(entry));
    }
    if (window.size() > cap) {
        window.erase(window.begin(),
                     window.begin() + static_cast<std::ptrdiff_t>(window.size() - cap));
    }
    if (options.field) {
        const std::size_t keep = *options.field;
        if (keep < 1 || keep > state.meta.field_labels.size()) {
            throw ValidationError("field index outside the channel's fields");
        }
        for (FeedEntry& entry : window) {
            for (std::size_t f = 0; f < entry.values.size(); ++f) {
                if (f != keep - 1) entry.values[f] = std::nullopt;
            }
        }
    }
    return window;
}

Channel ChannelStore::channel(std::int64_t channel_id) const {
    return state_for_id(channel_id).meta;
}

std::vector<Channel> ChannelStore::channels() const {
    std::shared_lock lock(mutex_);
    std::vector<Channel> out;
    for (const auto& [id, state] : channels_) out.push_back(state->meta);
    return out;
}

bool ChannelStore::empty() const {
    std::shared_lock lock(mutex_);
    return channels_.empty();
}

}  // namespace pondwatch
