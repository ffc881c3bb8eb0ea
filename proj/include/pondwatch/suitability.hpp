#ifndef PONDWATCH_SUITABILITY_HPP
#define PONDWATCH_SUITABILITY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pondwatch/common.hpp"
#include "pondwatch/fixtures.hpp"

namespace pondwatch {

// Acceptance band for one water parameter.
struct IdealRange {
    Parameter parameter = Parameter::Ph;
    Interval range{};
};

// pH 6.5-8.5, temperature 16-24 C, turbidity 0-10 NTU, conductivity 970-1825
// uS/cm, depth 1-5 m.
std::vector<IdealRange> default_ideal_ranges();
const Interval& ideal_range_for(Parameter parameter, const std::vector<IdealRange>& ranges);

enum class PhZone { Death, NoReproduction, SlowGrowth, Critical, Ideal };
std::string_view ph_zone_name(PhZone zone);

// Survival zones over the 0..14 scale; every pH maps to exactly one zone.
PhZone classify_ph(double ph);

enum class OxygenStatus { Healthy, Hazardous, EmergencyAeration, Critical };
std::string_view oxygen_status_name(OxygenStatus status);

// Thresholds at 5, 4 and 2 mg/L partition the axis.
OxygenStatus classify_do(double do_mg_l);

struct ParameterStatus {
    Parameter parameter = Parameter::Ph;
    std::size_t sample_count = 0;
    double in_range_fraction = 0.0;
    double median = 0.0;
    Interval observed{};
    bool pass = false;
};

struct SuitabilityConfig {
    double pass_threshold = 0.70;  // minimum in-range fraction, inclusive
    std::vector<IdealRange> ranges = default_ideal_ranges();
};

// A parameter passes when at least the threshold fraction of its samples sit
// inside the ideal band (inclusive) and the median does too.
ParameterStatus check_parameter(Parameter parameter, const std::vector<double>& samples,
                                const SuitabilityConfig& config = {});

struct PondVerdict {
    int pond_id = 0;
    std::vector<ParameterStatus> parameters;
    Interval depth_range_m{};
    bool depth_pass = false;
    bool recommended = false;
    std::string remarks;
    // Lab measurements reported alongside the verdict; never part of it.
    std::optional<fixtures::LabReadings> lab;
};

// Depth passes iff the whole static range sits inside the ideal band;
// recommended iff every evaluated parameter passes.
PondVerdict evaluate_pond(int pond_id, const std::map<Parameter, std::vector<double>>& samples,
                          Interval depth_range_m, const SuitabilityConfig& config = {});

// All five built-in ponds judged on the embedded sample tables.
std::vector<PondVerdict> evaluate_fixture_ponds(const SuitabilityConfig& config = {});

struct ReadingSummary {
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
};

ReadingSummary summarize_readings(const std::vector<double>& samples);

// Plain-text table with one row per pond: pond, pH, temperature, turbidity,
// depth, conductivity, remarks.
std::string verdict_table_text(const std::vector<PondVerdict>& verdicts);
std::string verdict_json(const std::vector<PondVerdict>& verdicts);

}  // namespace pondwatch

#endif
