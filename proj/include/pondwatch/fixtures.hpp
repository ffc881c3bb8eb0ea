#ifndef PONDWATCH_FIXTURES_HPP
#define PONDWATCH_FIXTURES_HPP

#include <span>
#include <string>

#include "pondwatch/common.hpp"

namespace pondwatch::fixtures {

inline constexpr int kPondCount = 5;
inline constexpr int kSamplesPerPond = 20;

// The embedded field-session tables: 20 samples per pond for pH, temperature,
// conductivity and turbidity, in published order, exact to two decimals.
// Throws NotFoundError for ponds outside 1..5 or parameters without a table.
std::span<const double, kSamplesPerPond> table(int pond_id, Parameter parameter);

bool has_table(Parameter parameter);

// Single lab measurements taken for pond 1 only (mg/L).
struct LabReadings {
    double dissolved_oxygen;
    double bod;
    double cod;
};
LabReadings pond1_lab_readings();

// Whole corpus as CSV: pond_id,parameter,sample_index,value
std::string to_csv();

}  // namespace pondwatch::fixtures

#endif
