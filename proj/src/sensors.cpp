#include "pondwatch/sensors.hpp"

#include <algorithm>
#include <cmath>

#include "pondwatch/fixtures.hpp"
#include "pondwatch/rng.hpp"

namespace pondwatch {
namespace {

Interval table_envelope(int pond_id, Parameter parameter) {
    auto values = fixtures::table(pond_id, parameter);
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return Interval{*lo, *hi};
}

// Simulation order is part of the determinism contract.
constexpr Parameter kStreamParameters[] = {
    Parameter::Ph, Parameter::TemperatureC, Parameter::TurbidityNtu,
    Parameter::ConductivityUsCm, Parameter::DepthM,
};

double snap(double value, double resolution) {
    return round_half_away(value / resolution) * resolution;
}

}  // namespace

SensorSpec default_sensor_spec(Parameter parameter) {
    switch (parameter) {
        case Parameter::Ph:
            return {parameter, 0.0, 14.0, 0.01, 0.05};
        case Parameter::TemperatureC:
            return {parameter, -55.0, 125.0, 0.0625, 0.1};  // 12-bit DS18B20
        case Parameter::TurbidityNtu:
            return {parameter, 0.0, 3000.0, 0.01, 0.01};
        case Parameter::ConductivityUsCm:
            return {parameter, 0.0, 20000.0, 0.01, 5.0};
        case Parameter::DepthM:
            return {parameter, 0.0, 400.0, 0.01, 0.01};  // HC-SR04 reach
        case Parameter::DoMgL:
        case Parameter::BodMgL:
        case Parameter::CodMgL:
            return {parameter, 0.0, 100.0, 0.01, 0.0};
    }
    return {parameter, 0.0, 1.0, 0.01, 0.0};
}

const Interval& PondProfile::envelope(Parameter parameter) const {
    switch (parameter) {
        case Parameter::Ph: return ph;
        case Parameter::TemperatureC: return temperature_c;
        case Parameter::TurbidityNtu: return turbidity_ntu;
        case Parameter::ConductivityUsCm: return conductivity_us_cm;
        case Parameter::DepthM: return depth_range_m;
        default: throw DomainError("pond profile has no envelope for this parameter");
    }
}

PondProfile built_in_profile(int pond_id) {
    PondProfile p;
    p.pond_id = pond_id;
    switch (pond_id) {
        case 1: p.length_m = 26; p.width_m = 17; p.depth_range_m = {1, 2}; break;
        case 2: p.length_m = 52; p.width_m = 30; p.depth_range_m = {1, 2}; break;
        case 3: p.length_m = 105; p.width_m = 35; p.depth_range_m = {1, 2}; break;
        case 4: p.length_m = 156; p.width_m = 80; p.depth_range_m = {2, 4}; break;
        case 5: p.length_m = 40; p.width_m = 20; p.depth_range_m = {1, 3}; break;
        default:
            throw NotFoundError("no built-in profile for pond " + std::to_string(pond_id));
    }
    p.ph = table_envelope(pond_id, Parameter::Ph);
    p.temperature_c = table_envelope(pond_id, Parameter::TemperatureC);
    p.turbidity_ntu = table_envelope(pond_id, Parameter::TurbidityNtu);
    p.conductivity_us_cm = table_envelope(pond_id, Parameter::ConductivityUsCm);
    return p;
}

double ultrasonic_distance(double travel_time_s, const UltrasonicModel& model) {
    if (travel_time_s < 0.0) throw DomainError("negative echo travel time");
    if (model.speed_of_sound_m_s <= 0.0) throw DomainError("speed of sound must be positive");
    return travel_time_s / 2.0 * model.speed_of_sound_m_s;
}

double depth_from_echo(double travel_time_s, const UltrasonicModel& model) {
    const double distance = ultrasonic_distance(travel_time_s, model);
    if (distance > model.sensor_height_m) {
        throw DomainError("echo distance exceeds mount height (negative depth)");
    }
    return model.sensor_height_m - distance;
}

double conductivity_from_temperature(double base_cond_25c_us_cm, double temp_c,
                                     double coeff_per_c) {
    if (base_cond_25c_us_cm <= 0.0) throw DomainError("base conductivity must be positive");
    if (coeff_per_c <= 0.0 || coeff_per_c > 0.04) {
        throw DomainError("temperature coefficient outside (0, 0.04]");
    }
    return base_cond_25c_us_cm * (1.0 + coeff_per_c * (temp_c - 25.0));
}

double quantize_temperature(double temp_c, int resolution_bits) {
    if (resolution_bits < 9 || resolution_bits > 12) {
        throw DomainError("DS18B20 resolution is 9 to 12 bits");
    }
    if (temp_c < -55.0 || temp_c > 125.0) {
        throw DomainError("temperature outside the -55..125 C sensor range");
    }
    const double step = std::ldexp(1.0, -(resolution_bits - 8));
    return snap(temp_c, step);
}

double turbidity_from_voltage(double volts, const TurbidityCalibration& calibration) {
    if (volts < 0.0 || volts > 4.5) throw DomainError("probe voltage outside 0..4.5 V");
    if (calibration.v_opaque >= calibration.v_clear) {
        throw DomainError("opaque voltage must be below clear voltage");
    }
    const double ntu = calibration.ntu_max * (calibration.v_clear - volts) /
                       (calibration.v_clear - calibration.v_opaque);
    return std::clamp(ntu, 0.0, calibration.ntu_max);
}

std::vector<ReadingSample> simulate_pond_stream(const PondProfile& profile,
                                                std::int64_t duration_s,
                                                std::int64_t interval_s, std::uint64_t seed,
                                                const StreamOptions& options) {
    if (duration_s <= 0) throw ValidationError("duration must be positive");
    if (interval_s <= 0) throw ValidationError("interval must be positive");

    auto spec_for = [&options](Parameter p) {
        for (const SensorSpec& s : options.sensor_specs) {
            if (s.parameter == p) return s;
        }
        return default_sensor_spec(p);
    };

    UltrasonicModel sonar =
        options.ultrasonic.value_or(UltrasonicModel{340.0, profile.depth_range_m.hi});

    Rng rng(seed);
    std::vector<ReadingSample> out;
    for (std::int64_t t = 0; t < duration_s; t += interval_s) {
        for (Parameter p : kStreamParameters) {
            const Interval& envelope = profile.envelope(p);
            const SensorSpec spec = spec_for(p);
            double value = rng.uniform(envelope.lo, envelope.hi);
            if (spec.noise_sigma > 0.0) value = rng.normal(value, spec.noise_sigma);
            if (p == Parameter::DepthM) {
                // Route through the echo model so the distance law is the
                // one the stream exercises.
                const double target = envelope.clamp(value);
                const double travel =
                    2.0 * (sonar.sensor_height_m - target) / sonar.speed_of_sound_m_s;
                value = depth_from_echo(travel, sonar);
            }
            value = snap(value, spec.resolution);
            value = envelope.clamp(value);
            value = std::clamp(value, spec.min, spec.max);
            out.push_back(ReadingSample{t, profile.pond_id, p, value});
        }
    }
    return out;
}

}  // namespace pondwatch
