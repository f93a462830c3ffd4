#include "dyna/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dyna {

namespace {

void check_grads(std::span<const double> grads, std::size_t expected, const char* who) {
    if (grads.size() != expected) {
        throw std::invalid_argument(std::string(who) + ": gradient shape " +
                                    std::to_string(grads.size()) + " does not match parameter shape " +
                                    std::to_string(expected));
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!std::isfinite(grads[i])) {
            throw std::domain_error(std::string(who) + ": non-finite gradient at index " +
                                    std::to_string(i));
        }
    }
}

void check_beta(double beta, const char* who) {
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw std::invalid_argument(std::string(who) + ": decay rate must lie in [0, 1), got " +
                                    std::to_string(beta));
    }
}

} // namespace

ParamGroup::ParamGroup(std::vector<double> initial_params, int n_inputs_)
    : params(std::move(initial_params)),
      grad_ema(params.size(), 0.0),
      velocity(params.size(), 0.0),
      n_inputs(n_inputs_) {
    if (n_inputs < 1) {
        throw std::invalid_argument("ParamGroup: n_inputs must be >= 1, got " +
                                    std::to_string(n_inputs));
    }
}

void dyna_step(ParamGroup& group, std::span<const double> grads, const DynaConfig& config) {
    check_grads(grads, group.size(), "dyna_step");
    check_beta(config.beta, "dyna_step");
    if (!(config.gamma > 0.0)) {
        throw std::invalid_argument("dyna_step: stepsize factor must be > 0");
    }
    if (!(config.omega_eps >= 0.0)) {
        throw std::invalid_argument("dyna_step: cut-off frequency must be >= 0");
    }

    group.step_count += 1;
    const double beta = config.beta;
    const double decay_in = 1.0 - beta;
    const double zeta = config.damping.at(group.step_count);
    group.total_weight = beta * group.total_weight + decay_in;

    const double mu = group.total_weight;
    const double kick = decay_in / (2.0 * zeta);
    const double alpha = 2.0 * config.gamma / static_cast<double>(group.n_inputs);
    const std::size_t n = group.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        group.grad_ema[i] = beta * group.grad_ema[i] + decay_in * std::abs(g);
        const double omega = std::sqrt(group.grad_ema[i] / mu) + config.omega_eps;
        group.velocity[i] = beta * group.velocity[i] - kick * g / omega;
        const double v_hat = group.velocity[i] / mu;
        group.params[i] += alpha * v_hat / omega;
    }
}

void restart_group(ParamGroup& group, const RestartMode& mode) {
    if (mode.is_zero) {
        std::fill(group.grad_ema.begin(), group.grad_ema.end(), 0.0);
        std::fill(group.velocity.begin(), group.velocity.end(), 0.0);
        group.total_weight = 0.0;
        group.step_count = 0;
        return;
    }
    if (!(mode.factor > 0.0 && mode.factor <= 1.0)) {
        throw std::invalid_argument("restart_group: rescale factor must lie in (0, 1], got " +
                                    std::to_string(mode.factor));
    }
    for (double& e : group.grad_ema) e *= mode.factor;
    for (double& v : group.velocity) v *= mode.factor;
    group.total_weight *= mode.factor;
}

double total_weight_closed_form(double beta, std::int64_t t) {
    check_beta(beta, "total_weight_closed_form");
    if (t < 0) {
        throw std::invalid_argument("total_weight_closed_form: t must be >= 0");
    }
    return 1.0 - std::pow(beta, static_cast<double>(t));
}

AdamState::AdamState(std::size_t n, double alpha_, double beta1_, double beta2_, double eps_)
    : first_moment(n, 0.0), second_moment(n, 0.0),
      alpha(alpha_), beta1(beta1_), beta2(beta2_), eps(eps_) {
    check_beta(beta1, "AdamState");
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("AdamState: learning rate must be > 0");
    }
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("AdamState: eps must be >= 0");
    }
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
    if (params.size() != state.size()) {
        throw std::invalid_argument("adam_step: parameter shape does not match state shape");
    }
    check_grads(grads, state.size(), "adam_step");
    check_beta(state.beta2, "adam_step (beta2)");

    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);
    const std::size_t n = state.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        state.first_moment[i] = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * g;
        state.second_moment[i] = state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.first_moment[i] / bc1;
        const double v_hat = state.second_moment[i] / bc2;
        params[i] -= state.alpha * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

void dyna_prototype_step(AdamState& state, std::span<double> params,
                         std::span<const double> grads) {
    if (params.size() != state.size()) {
        throw std::invalid_argument("dyna_prototype_step: parameter shape does not match state shape");
    }
    check_grads(grads, state.size(), "dyna_prototype_step");
    if (!(state.beta2 > 0.0 && state.beta2 <= 2.0)) {
        throw std::invalid_argument("dyna_prototype_step: damping ratio (beta2) must lie in (0, 2]");
    }

    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const double bc = 1.0 - std::pow(state.beta1, t);
    const double kick = (1.0 - state.beta1) / (2.0 * state.beta2);
    const std::size_t n = state.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        state.second_moment[i] = state.beta1 * state.second_moment[i] + (1.0 - state.beta1) * std::abs(g);
        const double freq = std::sqrt(state.second_moment[i] / bc) + state.eps;
        state.first_moment[i] = state.beta1 * state.first_moment[i] + kick * g / freq;
        const double m_hat = state.first_moment[i] / bc;
        params[i] -= state.alpha * m_hat / freq;
    }
}

} // namespace dyna
