#include "pondwatch/timeutil.hpp"

#include <cstdio>
#include <ctime>

namespace pondwatch {

std::string format_iso8601(UnixTime t) {
    std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::optional<UnixTime> parse_timestamp(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::string s(text);
    std::tm tm{};
    int year, mon, day, hour, min;
    double sec;
    char sep;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%lf", &year, &mon, &day, &sep, &hour, &min,
                    &sec) == 7 &&
        (sep == 'T' || sep == ' ')) {
        tm.tm_year = year - 1900;
        tm.tm_mon = mon - 1;
        tm.tm_mday = day;
        tm.tm_hour = hour;
        tm.tm_min = min;
        tm.tm_sec = static_cast<int>(sec);  // sub-second input truncated
        return static_cast<UnixTime>(timegm(&tm));
    }
    // Fall back to epoch seconds.
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end && *end == '\0' && end != s.c_str()) return static_cast<UnixTime>(v);
    return std::nullopt;
}

UnixTime now_utc() { return static_cast<UnixTime>(std::time(nullptr)); }

}  // namespace pondwatch
