#include "pondwatch/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pondwatch/rng.hpp"

namespace pondwatch {

const std::array<std::string, kFeatureCount> kFeatureNames = {
    "ph", "temperature", "turbidity", "conductivity", "depth"};

const std::array<std::string, 11> kSpeciesNames = {
    "katla", "sing",      "prawn",  "rui",    "koi",   "pangas",
    "tilapia", "silvercarp", "karpio", "magur", "shrimp"};

std::vector<std::int64_t> Dataset::class_counts() const {
    std::vector<std::int64_t> counts(class_names.size(), 0);
    for (const Instance& inst : instances) counts.at(inst.label)++;
    return counts;
}

Dataset parse_dataset_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty dataset file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::string expected_header = "ph,temperature,turbidity,conductivity,depth,species";
    if (line != expected_header) {
        throw ValidationError("dataset header must be '" + expected_header + "'");
    }

    Dataset dataset;
    dataset.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        Instance inst;
        inst.features.resize(kFeatureCount);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            if (!std::getline(cells, cell, ',')) {
                throw ValidationError("dataset line " + std::to_string(line_no) + ": too few cells");
            }
            auto value = parse_double(cell);
            if (!value) {
                throw ValidationError("dataset line " + std::to_string(line_no) +
                                      ": bad number '" + cell + "'");
            }
            inst.features[f] = *value;
        }
        if (!std::getline(cells, cell)) {
            throw ValidationError("dataset line " + std::to_string(line_no) + ": missing species");
        }
        auto found = std::find(dataset.class_names.begin(), dataset.class_names.end(), cell);
        if (found == dataset.class_names.end()) {
            dataset.class_names.push_back(cell);
            inst.label = dataset.class_names.size() - 1;
        } else {
            inst.label = static_cast<std::size_t>(found - dataset.class_names.begin());
        }
        dataset.instances.push_back(inst);
    }
    if (dataset.instances.empty()) throw ValidationError("dataset has no instances");
    return dataset;
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset_csv(buf.str());
}

std::string dataset_to_csv(const Dataset& dataset) {
    std::ostringstream out;
    out << "ph,temperature,turbidity,conductivity,depth,species\n";
    for (const Instance& inst : dataset.instances) {
        for (double f : inst.features) out << format_double(f) << ',';
        out << dataset.class_names.at(inst.label) << '\n';
    }
    return out.str();
}

SpeciesConfig paper_species_config() {
    // Temperatures for rui, koi, silvercarp and karpio are the published
    // growing ranges; every other number here is a synthetic default.
    auto env = [](const std::string& name, Interval ph, Interval temp, Interval turb,
                  Interval cond, Interval depth) {
        return SpeciesEnvelope{name, {ph, temp, turb, cond, depth}};
    };
    SpeciesConfig config;
    config.species = {
        env("katla", {7.0, 8.5}, {25.0, 32.0}, {2.0, 8.0}, {1000.0, 1400.0}, {1.5, 4.0}),
        env("sing", {6.5, 8.0}, {24.0, 30.0}, {3.0, 10.0}, {900.0, 1300.0}, {1.0, 2.5}),
        env("prawn", {7.5, 8.5}, {22.0, 28.0}, {1.0, 6.0}, {1400.0, 1825.0}, {1.0, 2.0}),
        env("rui", {6.5, 8.5}, {20.0, 26.0}, {2.0, 8.0}, {970.0, 1300.0}, {1.5, 3.5}),
        env("koi", {6.5, 8.0}, {15.0, 25.0}, {3.0, 10.0}, {900.0, 1200.0}, {1.0, 2.0}),
        env("pangas", {6.8, 8.2}, {26.0, 32.0}, {2.0, 9.0}, {1100.0, 1500.0}, {2.0, 4.5}),
        env("tilapia", {6.0, 8.5}, {25.0, 30.0}, {2.0, 10.0}, {1000.0, 1600.0}, {1.0, 3.0}),
        env("silvercarp", {6.5, 8.5}, {18.0, 30.0}, {1.0, 7.0}, {970.0, 1400.0}, {1.5, 4.0}),
        env("karpio", {6.8, 8.0}, {20.0, 25.0}, {2.0, 8.0}, {1100.0, 1700.0}, {1.0, 3.0}),
        env("magur", {6.5, 8.0}, {24.0, 32.0}, {4.0, 10.0}, {900.0, 1400.0}, {1.0, 2.0}),
        env("shrimp", {7.5, 8.5}, {23.0, 30.0}, {1.0, 5.0}, {1500.0, 1825.0}, {1.0, 2.5}),
    };
    return config;
}

SpeciesConfig disjoint_species_config() {
    // Species i is identified by its (conductivity band, temperature band)
    // grid cell; the remaining features carry banded signal too so that
    // distance-based learners see margin in every dimension. All band gaps
    // exceed a tenth of the feature span, so 10-bin equal-width
    // discretization never merges two species in any single feature.
    SpeciesConfig config;
    for (std::size_t i = 0; i < kSpeciesNames.size(); ++i) {
        const std::size_t cond_band = i % 4;
        const std::size_t temp_band = i / 4;
        const std::size_t ph_band = (3 * i + i / 4) % 4;
        const std::size_t turb_band = (i + 2 * (i / 4)) % 4;
        const std::size_t depth_band = (i + i / 4) % 3;

        const double cond_lo = 1000.0 + 100.0 * static_cast<double>(cond_band);
        const double temp_lo = 15.0 + 5.0 * static_cast<double>(temp_band);
        const double ph_lo = 6.2 + 0.7 * static_cast<double>(ph_band);
        const double turb_lo = 2.0 + 1.0 * static_cast<double>(turb_band);
        const double depth_lo = 1.0 + 0.9 * static_cast<double>(depth_band);

        SpeciesEnvelope e;
        e.species = kSpeciesNames[i];
        e.features = {Interval{ph_lo, ph_lo + 0.4},
                      Interval{temp_lo, temp_lo + 3.0},
                      Interval{turb_lo, turb_lo + 0.6},
                      Interval{cond_lo, cond_lo + 60.0},
                      Interval{depth_lo, depth_lo + 0.5}};
        config.species.push_back(std::move(e));
    }
    return config;
}

SpeciesConfig grid_species_config() {
    // Bands abut, so additive feature noise produces genuine class overlap
    // at every grid boundary.
    SpeciesConfig config;
    for (std::size_t i = 0; i < kSpeciesNames.size(); ++i) {
        const double cond_lo = 1000.0 + 100.0 * static_cast<double>(i % 4);
        const double temp_lo = 15.0 + 5.0 * static_cast<double>(i / 4);
        SpeciesEnvelope e;
        e.species = kSpeciesNames[i];
        e.features = {Interval{6.5, 8.5},
                      Interval{temp_lo, temp_lo + 4.0},
                      Interval{2.0, 6.0},
                      Interval{cond_lo, cond_lo + 80.0},
                      Interval{1.0, 3.0}};
        config.species.push_back(std::move(e));
    }
    return config;
}

Dataset generate_labeled_dataset(std::size_t n, std::uint64_t seed, const SpeciesConfig& config,
                                 double noise_fraction) {
    if (n < 1) throw ValidationError("dataset size must be at least 1");
    if (config.species.empty()) throw ValidationError("species config is empty");

    Dataset dataset;
    dataset.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());
    for (const SpeciesEnvelope& e : config.species) dataset.class_names.push_back(e.species);

    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t label = rng.below(config.species.size());
        const SpeciesEnvelope& envelope = config.species[label];
        Instance inst;
        inst.label = label;
        inst.features.resize(kFeatureCount);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const Interval& range = envelope.features[f];
            double value = rng.uniform(range.lo, range.hi);
            if (noise_fraction > 0.0) {
                value = rng.normal(value, noise_fraction * range.width());
            }
            inst.features[f] = value;
        }
        dataset.instances.push_back(inst);
    }
    return dataset;
}

}  // namespace pondwatch
