#include <doctest.h>

#include "pondwatch/dataset.hpp"

using namespace pondwatch;

TEST_CASE("dataset CSV round trip") {
    const std::string csv =
        "ph,temperature,turbidity,conductivity,depth,species\n"
        "7.1,21.5,3.5,1000.25,1.5,rui\n"
        "6.8,18,4,1100,2,koi\n"
        "7.1,21.5,3.5,1000.25,1.5,rui\n";
    const Dataset d = parse_dataset_csv(csv);
    CHECK(d.size() == 3);
    CHECK(d.class_names == std::vector<std::string>{"rui", "koi"});
    CHECK(d.instances[0].features[3] == doctest::Approx(1000.25));
    CHECK(d.instances[1].label == 1);
    CHECK(d.class_counts() == std::vector<std::int64_t>{2, 1});

    const Dataset again = parse_dataset_csv(dataset_to_csv(d));
    REQUIRE(again.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(again.instances[i].features == d.instances[i].features);
        CHECK(again.instances[i].label == d.instances[i].label);
    }
}

TEST_CASE("dataset CSV rejects malformed input") {
    CHECK_THROWS_AS(parse_dataset_csv(""), ValidationError);
    CHECK_THROWS_AS(parse_dataset_csv("a,b\n1,2\n"), ValidationError);
    CHECK_THROWS_AS(
        parse_dataset_csv("ph,temperature,turbidity,conductivity,depth,species\n1,2,3\n"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_dataset_csv("ph,temperature,turbidity,conductivity,depth,species\nx,2,3,4,5,rui\n"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_dataset_csv("ph,temperature,turbidity,conductivity,depth,species\n"),
        ValidationError);
}

TEST_CASE("generator determinism and envelope containment") {
    const SpeciesConfig config = disjoint_species_config();
    const Dataset a = generate_labeled_dataset(220, 9, config);
    const Dataset b = generate_labeled_dataset(220, 9, config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.instances[i].label == b.instances[i].label);
        CHECK(a.instances[i].features == b.instances[i].features);
    }

    // Noise off: every feature inside its species envelope.
    for (const Instance& inst : a.instances) {
        const SpeciesEnvelope& env = config.species[inst.label];
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            CHECK(inst.features[f] >= env.features[f].lo);
            CHECK(inst.features[f] <= env.features[f].hi);
        }
    }

    const Dataset c = generate_labeled_dataset(220, 10, config);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        differs |= a.instances[i].features != c.instances[i].features;
    }
    CHECK(differs);

    CHECK_THROWS_AS(generate_labeled_dataset(0, 1, config), ValidationError);
    CHECK_THROWS_AS(generate_labeled_dataset(10, 1, SpeciesConfig{}), ValidationError);
}

TEST_CASE("published growing temperatures hold in the paper config") {
    const SpeciesConfig config = paper_species_config();
    const Dataset d = generate_labeled_dataset(1100, 4, config);
    const auto idx = [&](const std::string& name) {
        for (std::size_t i = 0; i < d.class_names.size(); ++i) {
            if (d.class_names[i] == name) return i;
        }
        FAIL("missing species");
        return std::size_t{0};
    };
    const std::size_t rui = idx("rui"), koi = idx("koi"), silvercarp = idx("silvercarp"),
                      karpio = idx("karpio");
    for (const Instance& inst : d.instances) {
        const double temp = inst.features[1];
        if (inst.label == rui) {
            CHECK(temp >= 20.0);
            CHECK(temp <= 26.0);
        } else if (inst.label == koi) {
            CHECK(temp >= 15.0);
            CHECK(temp <= 25.0);
        } else if (inst.label == silvercarp) {
            CHECK(temp >= 18.0);
            CHECK(temp <= 30.0);
        } else if (inst.label == karpio) {
            CHECK(temp >= 20.0);
            CHECK(temp <= 25.0);
        }
    }
}

TEST_CASE("all eleven species appear in every built-in config") {
    for (const SpeciesConfig& config :
         {paper_species_config(), disjoint_species_config(), grid_species_config()}) {
        REQUIRE(config.species.size() == kSpeciesNames.size());
        for (std::size_t i = 0; i < kSpeciesNames.size(); ++i) {
            CHECK(config.species[i].species == kSpeciesNames[i]);
            for (const Interval& range : config.species[i].features) {
                CHECK(range.lo <= range.hi);
            }
        }
    }
}
