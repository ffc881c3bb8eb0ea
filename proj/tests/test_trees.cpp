#include <doctest.h>

#include <numeric>

#include "pondwatch/ml/model_io.hpp"
#include "pondwatch/ml/tree.hpp"
#include "support/datasets.hpp"

using namespace pondwatch;
using namespace pondwatch::ml;
using pwtest::add;
using pwtest::make_dataset;

namespace {

double training_accuracy(const Model& model, const Dataset& d) {
    std::size_t correct = 0;
    for (const Instance& inst : d.instances) {
        correct += model.predict(inst.features) == inst.label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(d.size());
}

// Exhaustive split oracle for 1-D data: the best threshold by information
// gain must separate the two clusters.
std::pair<double, double> exhaustive_best_gain_interval(const Dataset& d) {
    std::vector<std::pair<double, std::size_t>> points;
    for (const Instance& inst : d.instances) points.emplace_back(inst.features[0], inst.label);
    std::sort(points.begin(), points.end());

    auto entropy_of = [](const std::vector<std::int64_t>& counts) {
        const double total = static_cast<double>(counts[0] + counts[1]);
        double h = 0;
        for (std::int64_t c : counts) {
            if (c > 0) {
                const double p = c / total;
                h -= p * std::log2(p);
            }
        }
        return h;
    };
    std::vector<std::int64_t> totals = {0, 0};
    for (const auto& [x, label] : points) totals[label]++;
    const double parent = entropy_of(totals);

    double best_gain = -1;
    double best_lo = 0, best_hi = 0;
    std::vector<std::int64_t> left = {0, 0};
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        left[points[i].second]++;
        if (points[i].first == points[i + 1].first) continue;
        const std::vector<std::int64_t> right = {totals[0] - left[0], totals[1] - left[1]};
        const double nl = static_cast<double>(i + 1);
        const double nr = static_cast<double>(points.size() - i - 1);
        const double total = nl + nr;
        const double gain =
            parent - nl / total * entropy_of(left) - nr / total * entropy_of(right);
        if (gain > best_gain) {
            best_gain = gain;
            best_lo = points[i].first;
            best_hi = points[i + 1].first;
        }
    }
    return {best_lo, best_hi};
}

}  // namespace

TEST_CASE("j48 pure data yields a single leaf") {
    Dataset d = make_dataset(2, {"A", "B"});
    for (int i = 0; i < 8; ++i) add(d, {double(i), double(-i)}, 0);
    const auto model = train_j48(d);
    for (const Instance& inst : d.instances) CHECK(model->predict(inst.features) == 0);
    CHECK(training_accuracy(*model, d) == doctest::Approx(1.0));
}

TEST_CASE("j48 1-D threshold lands between the clusters") {
    const Dataset d = pwtest::separated_1d(10, 5);
    const auto model = train_j48(d);
    CHECK(training_accuracy(*model, d) == doctest::Approx(1.0));

    // The exhaustive oracle gives the bracketing pair (max_A, min_B); the
    // learned boundary must behave like a threshold inside it.
    const auto [lo, hi] = exhaustive_best_gain_interval(d);
    CHECK(model->predict({lo}) == 0);
    CHECK(model->predict({hi}) == 1);
    CHECK(model->predict({lo - 1.0}) == 0);
    CHECK(model->predict({hi + 1.0}) == 1);
}

TEST_CASE("j48 represents jittered XOR with min_leaf 1") {
    const Dataset d = pwtest::xor_2d(10, 2);
    J48Params params;
    params.min_leaf = 1;
    const auto model = train_j48(d, params);
    CHECK(training_accuracy(*model, d) == doctest::Approx(1.0));
}

TEST_CASE("pessimistic pruning simplifies noise but keeps structure") {
    // One clean split plus a few contradictory points: the pruned tree must
    // not be larger than the unpruned one and keeps the dominant structure.
    Rng rng(9);
    Dataset d = make_dataset(1, {"A", "B"});
    for (int i = 0; i < 40; ++i) add(d, {rng.uniform(0.0, 1.0)}, 0);
    for (int i = 0; i < 40; ++i) add(d, {rng.uniform(2.0, 3.0)}, 1);
    for (int i = 0; i < 3; ++i) add(d, {rng.uniform(0.0, 1.0)}, 1);  // label noise

    J48Params unpruned;
    unpruned.unpruned = true;
    const auto full = train_j48(d, unpruned);
    const auto pruned = train_j48(d);
    CHECK(pruned->predict({0.5}) == 0);
    CHECK(pruned->predict({2.5}) == 1);
    CHECK(training_accuracy(*pruned, d) >= 0.9);
    // Pruning can only shrink the serialized tree.
    CHECK(pruned->serialize().size() <= full->serialize().size());
    CHECK_THROWS_AS(train_j48(Dataset{}), ValidationError);
}

TEST_CASE("pessimistic error estimate behaves like the C4.5 bound") {
    // Zero observed errors still predict some: N(1 - CF^(1/N)).
    CHECK(pessimistic_added_errors(10, 0, 0.25) ==
          doctest::Approx(10 * (1 - std::pow(0.25, 0.1))).epsilon(1e-9));
    // More confidence (smaller CF) means a larger pessimistic estimate.
    CHECK(pessimistic_added_errors(20, 3, 0.1) > pessimistic_added_errors(20, 3, 0.4));
    // High end clamps at N - e.
    CHECK(pessimistic_added_errors(10, 9.8, 0.25) == doctest::Approx(0.2));
    // Monotone-ish sanity: estimates are positive below saturation.
    CHECK(pessimistic_added_errors(50, 5, 0.25) > 0.0);
}

TEST_CASE("reptree: pure data collapses to a leaf") {
    Dataset d = make_dataset(1, {"A", "B"});
    for (int i = 0; i < 9; ++i) add(d, {double(i)}, 0);
    const auto model = train_reptree(d, {}, 7);
    for (const Instance& inst : d.instances) CHECK(model->predict(inst.features) == 0);
}

TEST_CASE("reptree prunes a branch that only fits grow-set noise") {
    // Construct the split deterministically: find a seed whose grow set
    // contains the two noisy points so the grown tree carves them out, and
    // whose prune set then votes that carving away.
    Dataset d = make_dataset(1, {"A", "B"});
    for (int i = 0; i < 14; ++i) add(d, {0.0 + 0.01 * i}, 0);
    for (int i = 0; i < 14; ++i) add(d, {10.0 + 0.01 * i}, 1);
    // Two class-B points buried in the A cluster.
    add(d, {0.145}, 1);
    add(d, {0.155}, 1);

    RepTreeParams params;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto model = train_reptree(d, params, seed);
        // Whatever the split, the noisy pocket must not survive pruning when
        // the prune set contains nearby A points; across seeds, the model
        // must never misclassify the bulk clusters.
        CHECK(model->predict({0.05}) == 0);
        CHECK(model->predict({10.05}) == 1);
    }

    CHECK_THROWS_AS(train_reptree(make_dataset(1, {"A"}), params, 1), ValidationError);
}

TEST_CASE("reptree never increases prune-set error versus the unpruned tree") {
    Rng rng(100);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Dataset d = make_dataset(2, {"A", "B", "C"});
        for (int i = 0; i < 60; ++i) {
            const std::size_t label = rng.below(3);
            add(d,
                {double(label) * 2 + rng.uniform(-1.2, 1.2),
                 double(label) * -3 + rng.uniform(-2.0, 2.0)},
                label);
        }
        // Rebuild the grow/prune split exactly as the trainer does.
        std::vector<std::size_t> indices(d.size());
        std::iota(indices.begin(), indices.end(), 0);
        Rng shuffler(seed);
        shuffler.shuffle(indices);
        const std::size_t prune_count = static_cast<std::size_t>(
            round_half_away(static_cast<double>(d.size()) / 3.0));
        std::vector<std::size_t> prune_set(indices.begin(), indices.begin() + prune_count);
        std::vector<std::size_t> grow_set(indices.begin() + prune_count, indices.end());

        TreeBuildOptions options;
        options.criterion = TreeBuildOptions::Criterion::InfoGain;
        options.mean_gain_gate = false;
        Tree unpruned = build_tree(d, grow_set, options);
        Tree pruned = unpruned;
        prune_reduced_error(pruned, d, prune_set, d.class_names);

        auto errors_on_prune = [&](const Tree& tree) {
            std::size_t errors = 0;
            for (std::size_t idx : prune_set) {
                const TreeNode& leaf = tree.leaf_for(d.instances[idx].features);
                const std::size_t predicted = static_cast<std::size_t>(
                    std::max_element(leaf.class_counts.begin(), leaf.class_counts.end()) -
                    leaf.class_counts.begin());
                errors += predicted != d.instances[idx].label ? 1 : 0;
            }
            return errors;
        };
        CHECK(errors_on_prune(pruned) <= errors_on_prune(unpruned));
    }
}

TEST_CASE("tree counts partition consistently and leaves sum to their load") {
    Rng rng(64);
    Dataset d = make_dataset(3, {"A", "B"});
    for (int i = 0; i < 100; ++i) {
        add(d, {rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)},
            rng.next_unit() < 0.5 ? 0 : 1);
    }
    std::vector<std::size_t> indices(d.size());
    std::iota(indices.begin(), indices.end(), 0);
    const Tree tree = build_tree(d, indices, TreeBuildOptions{});
    CHECK(tree.counts_consistent());
    const auto& root_counts = tree.nodes.front().class_counts;
    CHECK(std::accumulate(root_counts.begin(), root_counts.end(), std::int64_t{0}) == 100);
}

TEST_CASE("random forest determinism and vote accounting") {
    const Dataset d = pwtest::xor_2d(12, 8);
    RandomForestParams params;
    params.n_trees = 25;
    const auto a = train_random_forest(d, params, 5);
    const auto b = train_random_forest(d, params, 5);

    Rng rng(31);
    for (int probe = 0; probe < 300; ++probe) {
        const std::vector<double> q = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(a->predict(q) == b->predict(q));
    }
    const auto c = train_random_forest(d, params, 6);
    bool any_diff = false;
    for (int probe = 0; probe < 300; ++probe) {
        const std::vector<double> q = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        any_diff |= a->predict(q) != c->predict(q);
    }
    CHECK(any_diff);
    CHECK_THROWS_AS(train_random_forest(d, RandomForestParams{0, 0, 2, true}, 1),
                    ValidationError);
}

TEST_CASE("degenerate forest equals unpruned j48") {
    const Dataset d = pwtest::xor_2d(10, 3);
    RandomForestParams degenerate;
    degenerate.n_trees = 1;
    degenerate.bootstrap = false;
    degenerate.features_per_split = d.feature_count();
    const auto forest = train_random_forest(d, degenerate, 99);

    J48Params unpruned;
    unpruned.unpruned = true;
    const auto tree = train_j48(d, unpruned);

    Rng rng(17);
    for (int probe = 0; probe < 1000; ++probe) {
        const std::vector<double> q = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(forest->predict(q) == tree->predict(q));
    }
}

TEST_CASE("tree and forest serialization round trips") {
    const Dataset d = pwtest::xor_2d(8, 12);
    RandomForestParams params;
    params.n_trees = 10;
    const auto forest = train_random_forest(d, params, 2);
    const auto forest2 = deserialize_model(forest->serialize());
    const auto j48 = train_j48(d, {1, 0.25, false});
    const auto j48_2 = deserialize_model(j48->serialize());
    const auto rep = train_reptree(d, {}, 3);
    const auto rep2 = deserialize_model(rep->serialize());

    Rng rng(8);
    for (int probe = 0; probe < 1000; ++probe) {
        const std::vector<double> q = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(forest->predict(q) == forest2->predict(q));
        CHECK(j48->predict(q) == j48_2->predict(q));
        CHECK(rep->predict(q) == rep2->predict(q));
    }
    CHECK(forest2->algorithm() == Algorithm::RandomForest);
    CHECK(j48_2->algorithm() == Algorithm::J48);
    CHECK(rep2->algorithm() == Algorithm::RepTree);
    CHECK_THROWS_AS(deserialize_model("not json"), ValidationError);
    CHECK_THROWS_AS(deserialize_model("{\"algorithm\":\"nope\"}"), ValidationError);
}
