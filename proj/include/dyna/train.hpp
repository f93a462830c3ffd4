#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyna/dataset.hpp"
#include "dyna/model.hpp"
#include "dyna/optimizer.hpp"

namespace dyna::harness {

enum class OptimizerKind { Dyna, DynaPrototype, Adam };

// Which optimizer drives the run and with what hyper-parameters. The
// alpha/beta1/beta2/eps block configures Adam and the prototype (whose
// beta2 acts as the damping ratio); the dyna block configures Dyna.
struct OptimizerSpec {
    OptimizerKind kind = OptimizerKind::Dyna;
    DynaConfig dyna;
    double alpha = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Warm-restart policy: restart optimizer state when the epoch-average
// loss grows by more than rel_threshold relative to the previous epoch.
struct RestartPolicy {
    bool enabled = false;
    double rel_threshold = 0.0;
    RestartMode mode = RestartMode::zero();
};

struct TrainConfig {
    int epochs = 50;
    int n_batches = 96;
    double l2 = 0.000016;
    std::uint64_t seed = 0;
    OptimizerSpec optimizer;
    RestartPolicy restart;
};

struct EpochMetrics {
    int epoch = 0; // 0 is the untrained baseline row
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_acc = 0.0;
    double test_acc = 0.0;
};

struct RunRecord {
    std::vector<EpochMetrics> epochs;

    const EpochMetrics& final_metrics() const { return epochs.back(); }
};

// Trains in place: per epoch, reshuffles the train split with the seeded
// generator, walks n_batches near-equal minibatches, and records metrics.
// Identical (config, dataset, seed) produce bit-identical records.
RunRecord train(LogisticModel& model, const data::Dataset& dataset, const TrainConfig& config);

} // namespace dyna::harness
