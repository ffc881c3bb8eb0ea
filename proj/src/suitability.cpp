#include "pondwatch/suitability.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pondwatch/sensors.hpp"

namespace pondwatch {
namespace {

using nlohmann::json;

std::string range_text(const Interval& r) {
    return format_double(r.lo) + "-" + format_double(r.hi);
}

std::string failure_note(const ParameterStatus& status, const Interval& ideal) {
    std::string direction = "outside";
    if (status.median > ideal.hi) direction = "above";
    else if (status.median < ideal.lo) direction = "below";
    std::string name(parameter_name(status.parameter));
    return name + " " + range_text(status.observed) + " " + direction + " ideal " +
           range_text(ideal);
}

}  // namespace

std::vector<IdealRange> default_ideal_ranges() {
    return {
        {Parameter::Ph, {6.5, 8.5}},
        {Parameter::TemperatureC, {16.0, 24.0}},
        {Parameter::TurbidityNtu, {0.0, 10.0}},
        {Parameter::ConductivityUsCm, {970.0, 1825.0}},
        {Parameter::DepthM, {1.0, 5.0}},
    };
}

const Interval& ideal_range_for(Parameter parameter, const std::vector<IdealRange>& ranges) {
    for (const IdealRange& r : ranges) {
        if (r.parameter == parameter) return r.range;
    }
    throw NotFoundError(std::string("no ideal range for parameter ") +
                        std::string(parameter_name(parameter)));
}

std::string_view ph_zone_name(PhZone zone) {
    switch (zone) {
        case PhZone::Death: return "death";
        case PhZone::NoReproduction: return "no-reproduction";
        case PhZone::SlowGrowth: return "slow-growth";
        case PhZone::Critical: return "critical";
        case PhZone::Ideal: return "ideal";
    }
    return "unknown";
}

PhZone classify_ph(double ph) {
    if (ph < 0.0 || ph > 14.0) throw DomainError("pH outside the 0..14 scale");
    if (ph < 4.0 || ph > 11.0) return PhZone::Death;
    if (ph <= 5.0) return PhZone::NoReproduction;
    if (ph >= 6.5 && ph <= 8.5) return PhZone::Ideal;
    if (ph > 10.0) return PhZone::Critical;
    return PhZone::SlowGrowth;  // (5, 6.5) and (8.5, 10]
}

std::string_view oxygen_status_name(OxygenStatus status) {
    switch (status) {
        case OxygenStatus::Healthy: return "healthy";
        case OxygenStatus::Hazardous: return "hazardous";
        case OxygenStatus::EmergencyAeration: return "emergency-aeration";
        case OxygenStatus::Critical: return "critical";
    }
    return "unknown";
}

OxygenStatus classify_do(double do_mg_l) {
    if (do_mg_l < 0.0) throw DomainError("dissolved oxygen cannot be negative");
    if (do_mg_l >= 5.0) return OxygenStatus::Healthy;
    if (do_mg_l >= 4.0) return OxygenStatus::Hazardous;
    if (do_mg_l >= 2.0) return OxygenStatus::EmergencyAeration;
    return OxygenStatus::Critical;
}

ParameterStatus check_parameter(Parameter parameter, const std::vector<double>& samples,
                                const SuitabilityConfig& config) {
    if (samples.empty()) throw ValidationError("no samples to check");
    if (config.pass_threshold <= 0.0 || config.pass_threshold > 1.0) {
        throw ValidationError("pass threshold outside (0, 1]");
    }
    const Interval& ideal = ideal_range_for(parameter, config.ranges);

    ParameterStatus status;
    status.parameter = parameter;
    status.sample_count = samples.size();

    std::size_t in_range = 0;
    for (double v : samples) {
        if (ideal.contains(v)) ++in_range;
    }
    status.in_range_fraction = static_cast<double>(in_range) / samples.size();

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    status.median = (n % 2 == 1) ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    status.observed = {sorted.front(), sorted.back()};

    // "count >= threshold * n" keeps the boundary inclusive without relying
    // on the quotient's rounding.
    const bool fraction_ok =
        static_cast<double>(in_range) >= config.pass_threshold * static_cast<double>(n);
    status.pass = fraction_ok && ideal.contains(status.median);
    return status;
}

PondVerdict evaluate_pond(int pond_id, const std::map<Parameter, std::vector<double>>& samples,
                          Interval depth_range_m, const SuitabilityConfig& config) {
    if (samples.empty()) throw ValidationError("no parameter data for pond");

    PondVerdict verdict;
    verdict.pond_id = pond_id;
    verdict.depth_range_m = depth_range_m;

    std::vector<std::string> failures;
    for (const auto& [parameter, values] : samples) {
        // BOD/COD (and DO) carry no accept band; recorded, never judged.
        if (parameter == Parameter::DoMgL || parameter == Parameter::BodMgL ||
            parameter == Parameter::CodMgL) {
            continue;
        }
        ParameterStatus status = check_parameter(parameter, values, config);
        if (!status.pass) {
            failures.push_back(failure_note(status, ideal_range_for(parameter, config.ranges)));
        }
        verdict.parameters.push_back(std::move(status));
    }

    const Interval& depth_ideal = ideal_range_for(Parameter::DepthM, config.ranges);
    verdict.depth_pass = depth_ideal.contains(depth_range_m);
    if (!verdict.depth_pass) {
        failures.push_back("depth " + range_text(depth_range_m) + " outside ideal " +
                           range_text(depth_ideal));
    }

    verdict.recommended = failures.empty();
    if (verdict.recommended) {
        verdict.remarks = "Recommended";
    } else {
        std::string joined;
        for (const std::string& f : failures) {
            if (!joined.empty()) joined += "; ";
            joined += f;
        }
        verdict.remarks = "Not recommended: " + joined;
    }
    return verdict;
}

std::vector<PondVerdict> evaluate_fixture_ponds(const SuitabilityConfig& config) {
    std::vector<PondVerdict> verdicts;
    for (int pond = 1; pond <= fixtures::kPondCount; ++pond) {
        std::map<Parameter, std::vector<double>> samples;
        for (Parameter p : {Parameter::Ph, Parameter::TemperatureC, Parameter::TurbidityNtu,
                            Parameter::ConductivityUsCm}) {
            auto table = fixtures::table(pond, p);
            samples[p] = std::vector<double>(table.begin(), table.end());
        }
        PondVerdict verdict =
            evaluate_pond(pond, samples, built_in_profile(pond).depth_range_m, config);
        if (pond == 1) verdict.lab = fixtures::pond1_lab_readings();
        verdicts.push_back(std::move(verdict));
    }
    return verdicts;
}

ReadingSummary summarize_readings(const std::vector<double>& samples) {
    if (samples.empty()) throw ValidationError("no samples to summarize");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    ReadingSummary s;
    s.min = sorted.front();
    s.max = sorted.back();
    s.median = (n % 2 == 1) ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    s.count = n;
    return s;
}

std::string verdict_table_text(const std::vector<PondVerdict>& verdicts) {
    const char* headers[] = {"Pond", "pH",        "Temperature (C)",      "Turbidity (NTU)",
                             "Depth (m)", "Conductivity (uS/cm)", "Remarks"};
    constexpr Parameter columns[] = {Parameter::Ph, Parameter::TemperatureC,
                                     Parameter::TurbidityNtu, Parameter::ConductivityUsCm};

    auto observed_cell = [](const PondVerdict& v, Parameter p) -> std::string {
        auto it = std::find_if(v.parameters.begin(), v.parameters.end(),
                               [p](const ParameterStatus& s) { return s.parameter == p; });
        return it == v.parameters.end() ? "-" : range_text(it->observed);
    };

    std::vector<std::vector<std::string>> rows;
    for (const PondVerdict& v : verdicts) {
        rows.push_back({"Pond " + std::to_string(v.pond_id),
                        observed_cell(v, columns[0]),
                        observed_cell(v, columns[1]),
                        observed_cell(v, columns[2]),
                        range_text(v.depth_range_m),
                        observed_cell(v, columns[3]),
                        v.remarks});
    }

    std::size_t widths[7];
    for (int c = 0; c < 7; ++c) {
        widths[c] = std::string(headers[c]).size();
        for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
    }

    std::ostringstream out;
    auto emit_row = [&](const std::vector<std::string>& cells) {
        for (int c = 0; c < 7; ++c) {
            out << cells[c];
            if (c < 6) out << std::string(widths[c] - cells[c].size() + 2, ' ');
        }
        out << '\n';
    };
    emit_row({headers[0], headers[1], headers[2], headers[3], headers[4], headers[5], headers[6]});
    for (const auto& row : rows) emit_row(row);
    return out.str();
}

std::string verdict_json(const std::vector<PondVerdict>& verdicts) {
    json out = json::array();
    for (const PondVerdict& v : verdicts) {
        json ponds;
        ponds["pond_id"] = v.pond_id;
        ponds["recommended"] = v.recommended;
        ponds["remarks"] = v.remarks;
        ponds["depth_m"] = {{"lo", v.depth_range_m.lo}, {"hi", v.depth_range_m.hi},
                            {"pass", v.depth_pass}};
        json params = json::array();
        for (const ParameterStatus& s : v.parameters) {
            params.push_back({{"parameter", std::string(parameter_name(s.parameter))},
                              {"sample_count", s.sample_count},
                              {"in_range_fraction", s.in_range_fraction},
                              {"median", s.median},
                              {"observed", {{"min", s.observed.lo}, {"max", s.observed.hi}}},
                              {"pass", s.pass}});
        }
        ponds["parameters"] = std::move(params);
        if (v.lab) {
            ponds["lab_mg_l"] = {{"do", v.lab->dissolved_oxygen},
                                 {"bod", v.lab->bod},
                                 {"cod", v.lab->cod},
                                 {"do_status", std::string(oxygen_status_name(
                                                   classify_do(v.lab->dissolved_oxygen)))}};
        }
        out.push_back(std::move(ponds));
    }
    return out.dump(2) + "\n";
}

}  // namespace pondwatch
