#ifndef PONDWATCH_DATASET_HPP
#define PONDWATCH_DATASET_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pondwatch/common.hpp"

namespace pondwatch {

inline constexpr std::size_t kFeatureCount = 5;  // ph, temperature, turbidity,
                                                 // conductivity, depth
extern const std::array<std::string, kFeatureCount> kFeatureNames;

// The eleven target species.
extern const std::array<std::string, 11> kSpeciesNames;

// Feature count is fixed per dataset, not globally; the CSV schema uses the
// five water parameters but hand-built datasets may use any width.
struct Instance {
    std::vector<double> features;
    std::size_t label = 0;  // index into Dataset::class_names
};

struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::vector<Instance> instances;

    std::size_t size() const { return instances.size(); }
    std::size_t feature_count() const { return feature_names.size(); }
    std::vector<std::int64_t> class_counts() const;
};

// CSV with header ph,temperature,turbidity,conductivity,depth,species.
Dataset load_dataset_csv(const std::string& path);
Dataset parse_dataset_csv(const std::string& text);
std::string dataset_to_csv(const Dataset& dataset);

// Feature envelopes for one species, indexed like kFeatureNames.
struct SpeciesEnvelope {
    std::string species;
    std::array<Interval, kFeatureCount> features{};
};

struct SpeciesConfig {
    std::vector<SpeciesEnvelope> species;
};

// Published growing temperatures for rui, koi, silvercarp and karpio; every
// other envelope is synthetic and may overlap across species.
SpeciesConfig paper_species_config();

// Fully separable synthetic envelopes: banded signal in every feature, with
// band gaps wider than one discretization decile; every classifier should
// nail this noise-free.
SpeciesConfig disjoint_species_config();

// Ranking benchmark: species are identified only by the conductivity x
// temperature grid cell while pH, turbidity and depth are shared nuisance
// ranges. Under feature noise this separates ensemble learners from single
// trees and from nearest-neighbor.
SpeciesConfig grid_species_config();

// Species drawn uniformly, features uniform within the species envelope, then
// optional Gaussian noise with sigma = noise_fraction * envelope width.
Dataset generate_labeled_dataset(std::size_t n, std::uint64_t seed, const SpeciesConfig& config,
                                 double noise_fraction = 0.0);

}  // namespace pondwatch

#endif
