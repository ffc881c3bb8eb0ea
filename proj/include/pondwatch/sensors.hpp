#ifndef PONDWATCH_SENSORS_HPP
#define PONDWATCH_SENSORS_HPP

#include <cstdint>
#include <vector>

#include "pondwatch/common.hpp"

namespace pondwatch {

// Operating envelope of one physical sensor.
struct SensorSpec {
    Parameter parameter = Parameter::Ph;
    double min = 0.0;
    double max = 0.0;
    double resolution = 0.01;  // quantization step
    double noise_sigma = 0.0;
};

// Defaults per parameter (DS18B20 span, 0-4.5 V turbidity probe, etc.).
SensorSpec default_sensor_spec(Parameter parameter);

// Static description of one pond: footprint, depth band and the value
// envelopes its water parameters move in.
struct PondProfile {
    int pond_id = 0;
    double length_m = 0.0;
    double width_m = 0.0;
    Interval depth_range_m{};
    Interval ph{};
    Interval temperature_c{};
    Interval turbidity_ntu{};
    Interval conductivity_us_cm{};

    const Interval& envelope(Parameter parameter) const;
};

// The five built-in ponds: footprints and depth bands from the field survey,
// parameter envelopes equal to the embedded per-pond sample min/max.
PondProfile built_in_profile(int pond_id);

struct UltrasonicModel {
    double speed_of_sound_m_s = 340.0;
    double sensor_height_m = 1.0;  // mount height above the pond bottom
};

// Round-trip echo time to one-way distance: (t / 2) * v.
double ultrasonic_distance(double travel_time_s, const UltrasonicModel& model);

// Water depth under a sensor mounted sensor_height_m above the bottom.
double depth_from_echo(double travel_time_s, const UltrasonicModel& model);

// Linear temperature compensation about 25 C.
double conductivity_from_temperature(double base_cond_25c_us_cm, double temp_c,
                                     double coeff_per_c);

// Snap to the DS18B20 grid: steps of 2^-(bits-8) C, half away from zero.
double quantize_temperature(double temp_c, int resolution_bits);

struct TurbidityCalibration {
    double v_clear = 4.2;
    double v_opaque = 2.5;
    double ntu_max = 3000.0;
};

// Two-point linear map from probe voltage to NTU, clamped to [0, ntu_max].
double turbidity_from_voltage(double volts, const TurbidityCalibration& calibration = {});

struct StreamOptions {
    // Per-sensor overrides; when empty, default_sensor_spec applies.
    std::vector<SensorSpec> sensor_specs;
    // Echo model override; by default the mount height is the profile's
    // maximum depth.
    std::optional<UltrasonicModel> ultrasonic;
};

// One sample per parameter (pH, temperature, turbidity, conductivity, depth)
// per tick at t = 0, interval, ... while t < duration. Identical arguments
// produce identical sequences.
std::vector<ReadingSample> simulate_pond_stream(const PondProfile& profile,
                                                std::int64_t duration_s,
                                                std::int64_t interval_s, std::uint64_t seed,
                                                const StreamOptions& options = {});

}  // namespace pondwatch

#endif
