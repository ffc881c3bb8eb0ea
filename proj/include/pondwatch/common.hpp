#ifndef PONDWATCH_COMMON_HPP
#define PONDWATCH_COMMON_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pondwatch {

// Error taxonomy shared by every module. The HTTP layer maps these onto
// status codes (ValidationError -> 400, AuthError -> 401, NotFoundError ->
// 404); the CLI maps them onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class AuthError : public Error {
public:
    using Error::Error;
};

// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
    bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
    double width() const { return hi - lo; }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

// Water parameters carried by readings and feeds. Units are fixed per member.
enum class Parameter {
    Ph,
    TemperatureC,
    TurbidityNtu,
    ConductivityUsCm,
    DepthM,
    DoMgL,
    BodMgL,
    CodMgL,
};

inline constexpr std::array<Parameter, 8> kAllParameters = {
    Parameter::Ph,           Parameter::TemperatureC, Parameter::TurbidityNtu,
    Parameter::ConductivityUsCm, Parameter::DepthM,   Parameter::DoMgL,
    Parameter::BodMgL,       Parameter::CodMgL,
};

std::string_view parameter_name(Parameter p);
std::optional<Parameter> parse_parameter(std::string_view name);

// One timestamped sensor measurement for one pond/parameter.
struct ReadingSample {
    std::int64_t timestamp_s = 0;  // seconds since stream start
    int pond_id = 0;               // 1..5 for the built-in ponds
    Parameter parameter = Parameter::Ph;
    double value = 0.0;
};

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);
// Fixed-point with the given number of decimals, half away from zero.
std::string format_fixed(double value, int decimals);
// Strict double parse of the whole string; nullopt on any trailing junk.
std::optional<double> parse_double(std::string_view text);

// Grid snap with ties rounded half away from zero (cross-platform stable).
double round_half_away(double value);

}  // namespace pondwatch

#endif
