#ifndef PONDWATCH_FEED_EXPORT_HPP
#define PONDWATCH_FEED_EXPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "pondwatch/channel_store.hpp"

namespace pondwatch {

enum class FeedFormat { Csv, Json, Xml };

// "csv" / "json" / "xml" (file extensions).
std::optional<FeedFormat> parse_feed_format(std::string_view name);
std::string_view feed_format_content_type(FeedFormat format);

// All three formats carry the same channel metadata (without the write key)
// and the same entries; timestamps are ISO-8601 UTC.
std::string export_feed(const Channel& channel, const std::vector<FeedEntry>& entries,
                        FeedFormat format);

}  // namespace pondwatch

#endif
