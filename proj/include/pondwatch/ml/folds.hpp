#ifndef PONDWATCH_ML_FOLDS_HPP
#define PONDWATCH_ML_FOLDS_HPP

#include <cstdint>
#include <vector>

#include "pondwatch/dataset.hpp"
#include "pondwatch/metrics.hpp"
#include "pondwatch/ml/model.hpp"

namespace pondwatch::ml {

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;  // instance index -> fold id
};

// Per-class round-robin after a seeded shuffle; fold sizes and per-class
// counts per fold each differ by at most one.
FoldPlan stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

// Pooled confusion matrix over all held-out predictions. Per-fold trainer
// seeds derive deterministically from `seed`.
ConfusionMatrix cross_validate(Algorithm algorithm, const Dataset& dataset, std::size_t k,
                               std::uint64_t seed, const TrainerConfig& config = {});

}  // namespace pondwatch::ml

#endif
