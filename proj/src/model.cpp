#include "dyna/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace dyna::harness {

namespace {

void check_batch(const LogisticModel& model, std::span<const float> images,
                 std::span<const std::uint8_t> labels) {
    const auto dim = static_cast<std::size_t>(model.n_inputs);
    if (dim == 0 || images.size() % dim != 0) {
        throw std::invalid_argument("batch image size is not a multiple of the input width");
    }
    if (images.size() / dim != labels.size()) {
        throw std::invalid_argument("batch image count does not match label count");
    }
    for (std::uint8_t label : labels) {
        if (label >= model.n_classes) {
            throw std::invalid_argument("label " + std::to_string(int(label)) +
                                        " out of range for " + std::to_string(model.n_classes) +
                                        " classes");
        }
    }
}

void check_pixels(std::span<const float> images) {
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (!std::isfinite(images[i])) {
            throw std::invalid_argument("non-finite pixel at index " + std::to_string(i));
        }
    }
}

void logits_for(const LogisticModel& model, const float* x, double* out) {
    const int k = model.n_classes;
    const int dim = model.n_inputs;
    for (int c = 0; c < k; ++c) {
        const double* w = model.weights.data() + static_cast<std::size_t>(c) * dim;
        double acc = 0.0;
        for (int j = 0; j < dim; ++j) {
            acc += w[j] * static_cast<double>(x[j]);
        }
        out[c] = acc + model.bias[c];
    }
}

} // namespace

LogisticModel::LogisticModel(int n_classes_, int n_inputs_)
    : n_classes(n_classes_), n_inputs(n_inputs_),
      weights(static_cast<std::size_t>(n_classes_) * n_inputs_, 0.0), bias(n_classes_, 0.0) {
    if (n_classes < 2 || n_inputs < 1) {
        throw std::invalid_argument("LogisticModel: need n_classes >= 2 and n_inputs >= 1");
    }
}

std::vector<double> forward(const LogisticModel& model, std::span<const float> images) {
    check_pixels(images);
    const auto dim = static_cast<std::size_t>(model.n_inputs);
    if (dim == 0 || images.size() % dim != 0) {
        throw std::invalid_argument("batch image size is not a multiple of the input width");
    }
    const std::size_t batch = images.size() / dim;
    const int k = model.n_classes;

    std::vector<double> probs(batch * static_cast<std::size_t>(k));
    std::vector<double> row(k);
    for (std::size_t i = 0; i < batch; ++i) {
        logits_for(model, images.data() + i * dim, row.data());
        const double m = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (int c = 0; c < k; ++c) {
            row[c] = std::exp(row[c] - m);
            sum += row[c];
        }
        double* out = probs.data() + i * static_cast<std::size_t>(k);
        for (int c = 0; c < k; ++c) {
            out[c] = row[c] / sum;
        }
    }
    return probs;
}

LossAndGrads loss_and_gradients(const LogisticModel& model, std::span<const float> images,
                                std::span<const std::uint8_t> labels, double l2) {
    check_pixels(images);
    check_batch(model, images, labels);
    const std::size_t batch = labels.size();
    if (batch == 0) {
        throw std::invalid_argument("loss_and_gradients: empty batch");
    }
    const int k = model.n_classes;
    const int dim = model.n_inputs;

    LossAndGrads out;
    out.grad_weights.assign(model.weights.size(), 0.0);
    out.grad_bias.assign(model.bias.size(), 0.0);

    const double inv_batch = 1.0 / static_cast<double>(batch);
    std::vector<double> row(k);
    double ce = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        const float* x = images.data() + i * static_cast<std::size_t>(dim);
        logits_for(model, x, row.data());
        const double m = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (int c = 0; c < k; ++c) {
            row[c] = std::exp(row[c] - m);
            sum += row[c];
        }
        ce -= std::log(row[labels[i]] / sum);
        for (int c = 0; c < k; ++c) {
            // delta = (p - y) / batch
            double delta = row[c] / sum * inv_batch;
            if (c == labels[i]) delta -= inv_batch;
            out.grad_bias[c] += delta;
            double* gw = out.grad_weights.data() + static_cast<std::size_t>(c) * dim;
            for (int j = 0; j < dim; ++j) {
                gw[j] += delta * static_cast<double>(x[j]);
            }
        }
    }

    double w_sq = 0.0;
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        w_sq += model.weights[i] * model.weights[i];
        out.grad_weights[i] += l2 * model.weights[i];
    }
    out.loss = ce * inv_batch + 0.5 * l2 * w_sq;
    return out;
}

double loss_only(const LogisticModel& model, std::span<const float> images,
                 std::span<const std::uint8_t> labels, double l2) {
    check_pixels(images);
    check_batch(model, images, labels);
    const std::size_t batch = labels.size();
    if (batch == 0) {
        throw std::invalid_argument("loss_only: empty batch");
    }
    const int k = model.n_classes;
    const int dim = model.n_inputs;

    std::vector<double> row(k);
    double ce = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        logits_for(model, images.data() + i * static_cast<std::size_t>(dim), row.data());
        const double m = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (int c = 0; c < k; ++c) {
            sum += std::exp(row[c] - m);
        }
        ce -= (row[labels[i]] - m) - std::log(sum);
    }
    const double w_sq = std::inner_product(model.weights.begin(), model.weights.end(),
                                           model.weights.begin(), 0.0);
    return ce / static_cast<double>(batch) + 0.5 * l2 * w_sq;
}

FiniteDiffGradient finite_difference_gradient(const LogisticModel& model,
                                              std::span<const float> images,
                                              std::span<const std::uint8_t> labels, double l2,
                                              double delta, std::size_t n_coords,
                                              std::uint64_t seed) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("finite_difference_gradient: delta must be > 0");
    }
    const std::size_t n_params = model.weights.size() + model.bias.size();

    FiniteDiffGradient result;
    if (n_coords >= n_params) {
        result.coords.resize(n_params);
        std::iota(result.coords.begin(), result.coords.end(), std::size_t{0});
    } else {
        // Partial Fisher-Yates draw without replacement.
        std::vector<std::size_t> pool(n_params);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < n_coords; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng() % (n_params - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(n_coords);
        std::sort(pool.begin(), pool.end());
        result.coords = std::move(pool);
    }

    LogisticModel probe = model;
    result.values.reserve(result.coords.size());
    for (std::size_t coord : result.coords) {
        double* slot = coord < probe.weights.size()
                           ? &probe.weights[coord]
                           : &probe.bias[coord - probe.weights.size()];
        const double saved = *slot;
        *slot = saved + delta;
        const double plus = loss_only(probe, images, labels, l2);
        *slot = saved - delta;
        const double minus = loss_only(probe, images, labels, l2);
        *slot = saved;
        result.values.push_back((plus - minus) / (2.0 * delta));
    }
    return result;
}

double accuracy(const LogisticModel& model, std::span<const float> images,
                std::span<const std::uint8_t> labels) {
    check_batch(model, images, labels);
    if (labels.empty()) {
        return 0.0;
    }
    const int k = model.n_classes;
    const int dim = model.n_inputs;
    std::vector<double> row(k);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        logits_for(model, images.data() + i * static_cast<std::size_t>(dim), row.data());
        int best = 0;
        for (int c = 1; c < k; ++c) {
            if (row[c] > row[best]) best = c; // ties keep the lower index
        }
        if (best == labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

} // namespace dyna::harness
