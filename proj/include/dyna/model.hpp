#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dyna::harness {

// Softmax classifier on flat feature vectors: logits = W x + b.
struct LogisticModel {
    int n_classes = 0;
    int n_inputs = 0;
    std::vector<double> weights; // row-major n_classes x n_inputs
    std::vector<double> bias;    // n_classes

    LogisticModel() = default;
    LogisticModel(int n_classes, int n_inputs); // zero-initialized
};

// Row-stabilized softmax probabilities, one row per sample. Rejects
// non-finite pixels.
std::vector<double> forward(const LogisticModel& model, std::span<const float> images);

struct LossAndGrads {
    double loss = 0.0;
    std::vector<double> grad_weights;
    std::vector<double> grad_bias;
};

// Mean cross-entropy plus (l2/2)*||W||^2; exact closed-form gradients.
// The L2 term touches the weights only, never the bias.
LossAndGrads loss_and_gradients(const LogisticModel& model, std::span<const float> images,
                                std::span<const std::uint8_t> labels, double l2);

double loss_only(const LogisticModel& model, std::span<const float> images,
                 std::span<const std::uint8_t> labels, double l2);

// Central finite differences of the loss on a seeded subsample of
// parameter coordinates (flat index: weights row-major, then bias).
struct FiniteDiffGradient {
    std::vector<std::size_t> coords;
    std::vector<double> values;
};
FiniteDiffGradient finite_difference_gradient(const LogisticModel& model,
                                              std::span<const float> images,
                                              std::span<const std::uint8_t> labels, double l2,
                                              double delta, std::size_t n_coords,
                                              std::uint64_t seed);

// Fraction of samples whose argmax class matches the label; ties break
// toward the lowest class index. Empty input yields 0.
double accuracy(const LogisticModel& model, std::span<const float> images,
                std::span<const std::uint8_t> labels);

} // namespace dyna::harness
