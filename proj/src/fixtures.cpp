#include "pondwatch/fixtures.hpp"

#include <array>
#include <sstream>

namespace pondwatch::fixtures {
namespace {

using Table = std::array<std::array<double, kSamplesPerPond>, kPondCount>;

constexpr Table kPh = {{
    {7.67, 8.39, 8.24, 8.26, 8.23, 8.31, 8.38, 7.84, 6.70, 6.02,
     8.16, 8.23, 7.96, 7.79, 7.88, 7.84, 8.18, 8.16, 8.32, 8.23},
    {8.65, 8.66, 8.74, 8.57, 8.62, 8.69, 8.73, 8.63, 8.66, 8.75,
     8.77, 8.78, 8.81, 8.79, 8.87, 8.80, 8.78, 8.80, 8.79, 8.79},
    {6.02, 6.01, 6.00, 6.09, 6.93, 6.42, 6.48, 7.00, 7.27, 7.24,
     7.11, 7.60, 7.83, 7.75, 7.50, 7.07, 6.99, 6.87, 6.68, 6.95},
    {8.30, 8.15, 8.09, 7.99, 7.92, 7.96, 7.87, 7.70, 7.54, 7.50,
     7.43, 7.42, 7.26, 6.95, 6.78, 6.92, 6.87, 6.51, 7.02, 6.80},
    {3.84, 3.90, 3.91, 3.89, 3.88, 3.92, 3.91, 3.89, 3.90, 3.93,
     3.92, 3.86, 3.87, 3.86, 3.90, 3.89, 3.86, 3.85, 3.92, 3.95}
}};
constexpr Table kTemperature = {{
    {17.62, 17.50, 17.56, 17.75, 17.56, 17.69, 17.69, 17.56, 17.50, 17.62,
     17.62, 17.56, 17.62, 17.75, 17.75, 17.69, 17.69, 17.75, 17.56, 17.56},
    {17.75, 17.87, 17.94, 17.87, 17.81, 17.94, 17.81, 17.94, 17.94, 18.00,
     17.94, 18.00, 17.94, 18.00, 18.00, 17.81, 17.87, 18.00, 17.94, 17.94},
    {21.00, 21.00, 21.00, 21.06, 21.00, 20.94, 21.00, 21.00, 21.06, 21.00,
     21.06, 20.94, 20.87, 21.06, 20.87, 20.87, 21.06, 21.06, 21.00, 21.06},
    {21.44, 21.50, 21.37, 21.44, 21.50, 21.37, 21.25, 21.31, 21.12, 21.25,
     21.19, 21.12, 21.25, 21.19, 21.25, 21.06, 21.19, 21.19, 21.25, 21.25},
    {21.06, 21.09, 21.12, 21.06, 21.12, 21.19, 21.19, 21.12, 21.19, 21.06,
     21.25, 21.12, 21.06, 21.25, 21.06, 21.12, 21.19, 21.00, 21.19, 21.12}
}};
constexpr Table kConductivity = {{
    {995.88, 989.10, 992.49, 1003.23, 992.49, 999.83, 999.83, 992.49, 989.10, 995.88,
     995.62, 992.49, 995.88, 1003.23, 1003.23, 999.83, 999.83, 1003.23, 992.49, 992.49},
    {1003.23, 1010.01, 1013.97, 1010.01, 1006.62, 1013.97, 1006.62, 1013.97, 1013.97, 1017.36,
     1013.97, 1017.36, 1013.97, 1017.36, 1017.36, 1006.62, 1010.01, 1017.36, 1013.97, 1013.97},
    {1186.92, 1186.92, 1186.92, 1190.32, 1186.92, 1183.53, 1186.92, 1186.92, 1190.32, 1186.92,
     1190.32, 1183.53, 1179.57, 1190.32, 1179.57, 1189.57, 1190.32, 1190.32, 1186.92, 1190.32},
    {1211.79, 1215.18, 1207.83, 1211.79, 1215.18, 1207.83, 1201.05, 1204.44, 1193.70, 1201.05,
     1197.66, 1193.70, 1201.05, 1197.66, 1201.05, 1190.31, 1197.66, 1197.66, 1201.05, 1201.05},
    {1190.31, 1192.01, 1193.70, 1190.31, 1193.70, 1197.66, 1197.66, 1193.70, 1197.66, 1190.31,
     1201.05, 1193.70, 1190.31, 1201.05, 1190.31, 1193.70, 1197.66, 1186.92, 1197.66, 1193.70}
}};
constexpr Table kTurbidity = {{
    {3.56, 3.56, 3.55, 3.55, 3.55, 3.56, 3.56, 3.57, 3.56, 3.57,
     3.55, 3.55, 3.56, 3.56, 3.55, 3.55, 3.56, 3.56, 3.56, 3.56},
    {3.44, 3.45, 3.41, 3.46, 3.47, 3.48, 3.45, 3.46, 3.44, 3.47,
     3.47, 3.48, 3.43, 3.46, 3.46, 3.48, 3.48, 3.49, 3.50, 3.50},
    {3.48, 3.49, 3.48, 3.48, 3.47, 3.47, 3.46, 3.46, 3.45, 3.44,
     3.45, 3.45, 3.43, 3.41, 3.37, 3.36, 3.35, 3.33, 3.32, 3.31},
    {3.62, 3.62, 3.62, 3.61, 3.61, 3.61, 3.61, 3.60, 3.60, 3.60,
     3.61, 3.61, 3.62, 3.62, 3.62, 3.60, 3.60, 3.61, 3.61, 3.61},
    {3.56, 3.56, 3.56, 3.56, 3.57, 3.57, 3.57, 3.57, 3.57, 3.56,
     3.56, 3.56, 3.56, 3.57, 3.57, 3.57, 3.56, 3.56, 3.58, 3.58}
}};

const Table* table_for(Parameter parameter) {
    switch (parameter) {
        case Parameter::Ph: return &kPh;
        case Parameter::TemperatureC: return &kTemperature;
        case Parameter::ConductivityUsCm: return &kConductivity;
        case Parameter::TurbidityNtu: return &kTurbidity;
        default: return nullptr;
    }
}

}  // namespace

std::span<const double, kSamplesPerPond> table(int pond_id, Parameter parameter) {
    if (pond_id < 1 || pond_id > kPondCount) {
        throw NotFoundError("no fixture data for pond " + std::to_string(pond_id));
    }
    const Table* t = table_for(parameter);
    if (t == nullptr) {
        throw NotFoundError(std::string("no fixture table for parameter ") +
                            std::string(parameter_name(parameter)));
    }
    return std::span<const double, kSamplesPerPond>((*t)[pond_id - 1]);
}

bool has_table(Parameter parameter) { return table_for(parameter) != nullptr; }

LabReadings pond1_lab_readings() { return LabReadings{6.79, 7.0, 12.0}; }

std::string to_csv() {
    std::ostringstream out;
    out << "pond_id,parameter,sample_index,value\n";
    for (int pond = 1; pond <= kPondCount; ++pond) {
        for (Parameter p : {Parameter::Ph, Parameter::TemperatureC, Parameter::TurbidityNtu,
                            Parameter::ConductivityUsCm}) {
            auto values = table(pond, p);
            for (int i = 0; i < kSamplesPerPond; ++i) {
                out << pond << ',' << parameter_name(p) << ',' << i << ','
                    << format_fixed(values[i], 2) << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace pondwatch::fixtures
