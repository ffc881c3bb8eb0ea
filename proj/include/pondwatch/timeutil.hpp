#ifndef PONDWATCH_TIMEUTIL_HPP
#define PONDWATCH_TIMEUTIL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pondwatch {

// Feed timestamps are Unix seconds, UTC, second resolution.
using UnixTime = std::int64_t;

// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_iso8601(UnixTime t);

// Accepts the format above plus a space separator and, leniently, a plain
// integer (epoch seconds). Fractional seconds are truncated.
std::optional<UnixTime> parse_timestamp(std::string_view text);

UnixTime now_utc();

}  // namespace pondwatch

#endif
