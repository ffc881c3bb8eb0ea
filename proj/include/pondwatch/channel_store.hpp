#ifndef PONDWATCH_CHANNEL_STORE_HPP
#define PONDWATCH_CHANNEL_STORE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "pondwatch/common.hpp"
#include "pondwatch/timeutil.hpp"

namespace pondwatch {

inline constexpr std::size_t kMaxChannelFields = 8;

struct Channel {
    std::int64_t channel_id = 0;
    std::string name;
    std::vector<std::string> field_labels;  // 1..8 labels
    std::string write_key;
    UnixTime created_at = 0;
};

// Field labels of the reference channel: Turbidity, Temperature, PH, Depth.
std::vector<std::string> default_field_labels();

struct FeedEntry {
    std::int64_t entry_id = 0;  // dense, starting at 1 per channel
    UnixTime created_at = 0;
    std::vector<std::optional<double>> values;  // aligned to field_labels
};

struct ReadOptions {
    std::size_t results = 100;  // most recent N, capped at 8000
    std::optional<UnixTime> start;
    std::optional<UnixTime> end;
    std::optional<std::size_t> field;  // 1-based projection
};

// Drops entries earlier than session_start + warmup_s, where session_start
// defaults to the first entry's timestamp. Idempotent for a fixed anchor.
std::vector<FeedEntry> stabilization_filter(std::vector<FeedEntry> entries,
                                            std::int64_t warmup_s = 180,
                                            std::optional<UnixTime> session_start = std::nullopt);

// Append-only channel store; an NDJSON log per channel under data_dir (or
// purely in memory when data_dir is empty) with the index rebuilt on open.
// Writers to one channel serialize on that channel's mutex, so entry ids
// stay dense under concurrency.
class ChannelStore {
public:
    explicit ChannelStore(std::string data_dir = "");
    ~ChannelStore();

    ChannelStore(const ChannelStore&) = delete;
    ChannelStore& operator=(const ChannelStore&) = delete;

    Channel create_channel(const std::string& name, std::vector<std::string> field_labels);

    // field_values is keyed by 1-based field index. Returns the entry id.
    std::int64_t write_update(const std::string& write_key,
                              const std::map<std::size_t, double>& field_values,
                              std::optional<UnixTime> timestamp = std::nullopt);

    std::vector<FeedEntry> read_feed(std::int64_t channel_id, const ReadOptions& options = {}) const;

    Channel channel(std::int64_t channel_id) const;
    std::vector<Channel> channels() const;
    bool empty() const;

private:
    struct ChannelState;

    ChannelState& state_for_key(const std::string& write_key);
    const ChannelState& state_for_id(std::int64_t channel_id) const;
    void persist_channel_meta(const Channel& channel);
    void load();

    std::string data_dir_;
    mutable std::shared_mutex mutex_;  // guards the channel map
    std::map<std::int64_t, std::unique_ptr<ChannelState>> channels_;
    std::int64_t next_channel_id_ = 1;
};

}  // namespace pondwatch

#endif
