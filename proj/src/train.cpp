#include "dyna/train.hpp"

#include <memory>
#include <random>
#include <stdexcept>
#include <string>

namespace dyna::harness {

namespace {

// Minimal optimizer interface the epoch loop drives; params() is the flat
// parameter vector the model is refreshed from after every step.
class Driver {
public:
    virtual ~Driver() = default;
    virtual const std::vector<double>& params() const = 0;
    virtual void step(std::span<const double> grads) = 0;
    virtual void restart(const RestartMode& mode) = 0;
};

class DynaDriver final : public Driver {
public:
    DynaDriver(std::vector<double> theta0, int n_inputs, DynaConfig config)
        : group_(std::move(theta0), n_inputs), config_(std::move(config)) {}

    const std::vector<double>& params() const override { return group_.params; }
    void step(std::span<const double> grads) override { dyna_step(group_, grads, config_); }
    void restart(const RestartMode& mode) override { restart_group(group_, mode); }

private:
    ParamGroup group_;
    DynaConfig config_;
};

class AdamDriver final : public Driver {
public:
    AdamDriver(std::vector<double> theta0, const OptimizerSpec& spec, bool prototype)
        : theta_(std::move(theta0)),
          state_(theta_.size(), spec.alpha, spec.beta1, spec.beta2, spec.eps),
          prototype_(prototype) {}

    const std::vector<double>& params() const override { return theta_; }

    void step(std::span<const double> grads) override {
        if (prototype_) {
            dyna_prototype_step(state_, theta_, grads);
        } else {
            adam_step(state_, theta_, grads);
        }
    }

    void restart(const RestartMode& mode) override {
        if (mode.is_zero) {
            std::fill(state_.first_moment.begin(), state_.first_moment.end(), 0.0);
            std::fill(state_.second_moment.begin(), state_.second_moment.end(), 0.0);
            state_.step_count = 0;
            return;
        }
        if (!(mode.factor > 0.0 && mode.factor <= 1.0)) {
            throw std::invalid_argument("restart: rescale factor must lie in (0, 1]");
        }
        for (double& m : state_.first_moment) m *= mode.factor;
        for (double& v : state_.second_moment) v *= mode.factor;
    }

private:
    std::vector<double> theta_;
    AdamState state_;
    bool prototype_;
};

std::vector<double> flatten(const LogisticModel& model) {
    std::vector<double> theta;
    theta.reserve(model.weights.size() + model.bias.size());
    theta.insert(theta.end(), model.weights.begin(), model.weights.end());
    theta.insert(theta.end(), model.bias.begin(), model.bias.end());
    return theta;
}

void unflatten(const std::vector<double>& theta, LogisticModel& model) {
    std::copy(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(model.weights.size()),
              model.weights.begin());
    std::copy(theta.begin() + static_cast<std::ptrdiff_t>(model.weights.size()), theta.end(),
              model.bias.begin());
}

std::unique_ptr<Driver> make_driver(const OptimizerSpec& spec, std::vector<double> theta0,
                                    int n_inputs) {
    switch (spec.kind) {
        case OptimizerKind::Dyna:
            return std::make_unique<DynaDriver>(std::move(theta0), n_inputs, spec.dyna);
        case OptimizerKind::DynaPrototype:
            return std::make_unique<AdamDriver>(std::move(theta0), spec, true);
        case OptimizerKind::Adam:
            return std::make_unique<AdamDriver>(std::move(theta0), spec, false);
    }
    throw std::logic_error("unknown optimizer kind");
}

std::span<const float> range_images(const data::Dataset& ds, const data::SplitRange& r) {
    return {ds.images.data() + r.begin * static_cast<std::size_t>(ds.dim),
            r.size() * static_cast<std::size_t>(ds.dim)};
}

std::span<const std::uint8_t> range_labels(const data::Dataset& ds, const data::SplitRange& r) {
    return {ds.labels.data() + r.begin, r.size()};
}

double range_accuracy(const LogisticModel& model, const data::Dataset& ds,
                      const data::SplitRange& r) {
    if (r.empty()) return 0.0;
    return accuracy(model, range_images(ds, r), range_labels(ds, r));
}

} // namespace

RunRecord train(LogisticModel& model, const data::Dataset& dataset, const TrainConfig& config) {
    if (config.epochs < 0) {
        throw std::invalid_argument("train: epochs must be >= 0");
    }
    const std::size_t n_train = dataset.train.size();
    if (n_train == 0) {
        throw std::invalid_argument("train: empty training split");
    }
    if (config.n_batches < 1 || static_cast<std::size_t>(config.n_batches) > n_train) {
        throw std::invalid_argument("train: n_batches must lie in [1, train size]");
    }
    if (dataset.dim != model.n_inputs) {
        throw std::invalid_argument("train: dataset width " + std::to_string(dataset.dim) +
                                    " does not match model input width " +
                                    std::to_string(model.n_inputs));
    }

    auto driver = make_driver(config.optimizer, flatten(model), model.n_inputs);

    RunRecord record;
    auto evaluate = [&](int epoch, double train_loss) {
        EpochMetrics m;
        m.epoch = epoch;
        m.train_loss = train_loss;
        m.train_acc = range_accuracy(model, dataset, dataset.train);
        m.val_acc = range_accuracy(model, dataset, dataset.val);
        m.test_acc = range_accuracy(model, dataset, dataset.test);
        record.epochs.push_back(m);
    };

    // Untrained baseline row; its loss is the whole-split mean.
    evaluate(0, loss_only(model, range_images(dataset, dataset.train),
                          range_labels(dataset, dataset.train), config.l2));

    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> perm(n_train);
    for (std::size_t i = 0; i < n_train; ++i) perm[i] = dataset.train.begin + i;

    std::vector<float> batch_images;
    std::vector<std::uint8_t> batch_labels;
    std::vector<double> grads(model.weights.size() + model.bias.size());
    const std::size_t dim = static_cast<std::size_t>(dataset.dim);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        // Fisher-Yates with the run-owned generator keeps shuffles pinned
        // across standard libraries.
        for (std::size_t i = n_train - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(perm[i], perm[j]);
        }

        double loss_sum = 0.0;
        for (int b = 0; b < config.n_batches; ++b) {
            const std::size_t lo = n_train * static_cast<std::size_t>(b) /
                                   static_cast<std::size_t>(config.n_batches);
            const std::size_t hi = n_train * static_cast<std::size_t>(b + 1) /
                                   static_cast<std::size_t>(config.n_batches);
            const std::size_t bsz = hi - lo;
            batch_images.resize(bsz * dim);
            batch_labels.resize(bsz);
            for (std::size_t i = 0; i < bsz; ++i) {
                const std::size_t src = perm[lo + i];
                std::copy_n(dataset.row(src), dim, batch_images.data() + i * dim);
                batch_labels[i] = dataset.labels[src];
            }

            LossAndGrads lg = loss_and_gradients(model, batch_images, batch_labels, config.l2);
            loss_sum += lg.loss;
            std::copy(lg.grad_weights.begin(), lg.grad_weights.end(), grads.begin());
            std::copy(lg.grad_bias.begin(), lg.grad_bias.end(),
                      grads.begin() + static_cast<std::ptrdiff_t>(lg.grad_weights.size()));
            try {
                driver->step(grads);
            } catch (const std::exception& e) {
                throw std::runtime_error("optimizer step failed at epoch " +
                                         std::to_string(epoch) + " batch " + std::to_string(b) +
                                         ": " + e.what());
            }
            unflatten(driver->params(), model);
        }

        const double epoch_loss = loss_sum / static_cast<double>(config.n_batches);
        evaluate(epoch, epoch_loss);

        if (config.restart.enabled && epoch >= 2) {
            const double prev = record.epochs[record.epochs.size() - 2].train_loss;
            if (epoch_loss > prev * (1.0 + config.restart.rel_threshold)) {
                driver->restart(config.restart.mode);
            }
        }
    }
    return record;
}

} // namespace dyna::harness
