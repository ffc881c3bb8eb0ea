#include "pondwatch/common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pondwatch {

std::string_view parameter_name(Parameter p) {
    switch (p) {
        case Parameter::Ph: return "ph";
        case Parameter::TemperatureC: return "temperature";
        case Parameter::TurbidityNtu: return "turbidity";
        case Parameter::ConductivityUsCm: return "conductivity";
        case Parameter::DepthM: return "depth";
        case Parameter::DoMgL: return "do";
        case Parameter::BodMgL: return "bod";
        case Parameter::CodMgL: return "cod";
    }
    return "unknown";
}

std::optional<Parameter> parse_parameter(std::string_view name) {
    for (Parameter p : kAllParameters) {
        if (parameter_name(p) == name) return p;
    }
    return std::nullopt;
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "0";
    return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::optional<double> parse_double(std::string_view text) {
    double out = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return out;
}

double round_half_away(double value) {
    return value < 0.0 ? std::ceil(value - 0.5) : std::floor(value + 0.5);
}

}  // namespace pondwatch
