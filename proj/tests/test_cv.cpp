#include <doctest.h>

#include "pondwatch/ml/folds.hpp"
#include "support/datasets.hpp"

using namespace pondwatch;
using namespace pondwatch::ml;

TEST_CASE("cross-validation: diagonal on separable data, totals conserved") {
    const Dataset d = pwtest::separated_1d(20, 6);
    const ConfusionMatrix cm = cross_validate(Algorithm::Knn, d, 10, 1);
    CHECK(cm.total() == static_cast<std::int64_t>(d.size()));
    CHECK(accuracy(cm) == doctest::Approx(1.0));
    CHECK(cm.at(0, 1) == 0);
    CHECK(cm.at(1, 0) == 0);
}

TEST_CASE("cross-validation is deterministic per seed") {
    const Dataset d = generate_labeled_dataset(150, 3, disjoint_species_config(), 0.4);
    for (Algorithm a : {Algorithm::J48, Algorithm::RandomForest, Algorithm::RepTree,
                        Algorithm::LogitBoost}) {
        TrainerConfig config;
        config.forest.n_trees = 15;
        const ConfusionMatrix x = cross_validate(a, d, 5, 9, config);
        const ConfusionMatrix y = cross_validate(a, d, 5, 9, config);
        CHECK(x.total() == static_cast<std::int64_t>(d.size()));
        for (std::size_t r = 0; r < x.size(); ++r) {
            for (std::size_t c = 0; c < x.size(); ++c) CHECK(x.at(r, c) == y.at(r, c));
        }
    }
}

TEST_CASE("matrix total equals instance count for every algorithm") {
    const Dataset d = generate_labeled_dataset(120, 5, disjoint_species_config(), 0.1);
    TrainerConfig config;
    config.forest.n_trees = 10;
    for (Algorithm a : all_algorithms()) {
        const ConfusionMatrix cm = cross_validate(a, d, 4, 2, config);
        CHECK(cm.total() == static_cast<std::int64_t>(d.size()));
    }
}

TEST_CASE("all six algorithms clear 95% on the noise-free disjoint set") {
    // Smaller sibling of the acceptance run, kept here as a regression canary.
    const Dataset d = generate_labeled_dataset(330, 1, disjoint_species_config());
    TrainerConfig config;
    config.forest.n_trees = 30;
    for (Algorithm a : all_algorithms()) {
        const ConfusionMatrix cm = cross_validate(a, d, 10, 1, config);
        CHECK(accuracy(cm) >= 0.95);
    }
}

TEST_CASE("propagates trainer preconditions") {
    Dataset tiny = pwtest::make_dataset(1, {"A", "B"});
    pwtest::add(tiny, {0.0}, 0);
    pwtest::add(tiny, {1.0}, 1);
    CHECK_THROWS_AS(cross_validate(Algorithm::Knn, tiny, 5, 1), ValidationError);
}
