#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dyna/schedule.hpp"

namespace dyna {

// Hyper-parameters of the Dyna optimizer. omega_eps is the minimum cut-off
// angular frequency; 0 is accepted (used by diagnostics), the shipped
// default is 1e-8.
struct DynaConfig {
    double gamma = 1.0;
    double beta = 0.9;
    DampingSchedule damping = DampingSchedule::constant(1.0);
    double omega_eps = 1e-8;
};

// Per-layer parameter vector plus optimizer state. All vectors share one
// shape; grad_ema is elementwise >= 0 and total_weight equals 1 - beta^t
// when no restart has rescaled it.
struct ParamGroup {
    std::vector<double> params;
    std::vector<double> grad_ema;  // EMA of |gradient|
    std::vector<double> velocity;  // damped velocity EMA
    double total_weight = 0.0;
    std::int64_t step_count = 0;
    int n_inputs = 1;              // fan-in of the owning layer

    ParamGroup() = default;
    ParamGroup(std::vector<double> initial_params, int n_inputs);

    std::size_t size() const { return params.size(); }
};

// Warm-restart action: zero the accumulated state or rescale it by a
// factor in (0, 1]. Parameters are never touched.
struct RestartMode {
    static RestartMode zero() { return RestartMode{true, 0.0}; }
    static RestartMode rescale(double factor) { return RestartMode{false, factor}; }

    bool is_zero = true;
    double factor = 0.0;
};

// One Dyna update. Throws std::invalid_argument on shape mismatch or bad
// config, std::domain_error naming the offending index on a non-finite
// gradient; the group is unchanged on error.
void dyna_step(ParamGroup& group, std::span<const double> grads, const DynaConfig& config);

void restart_group(ParamGroup& group, const RestartMode& mode);

// Closed form 1 - beta^t of the total-weight recurrence; test oracle for
// the accumulated value in ParamGroup.
double total_weight_closed_form(double beta, std::int64_t t);

// Moment state for the reference Adam optimizer and the Adam-derived
// prototype. For the prototype, beta2 is read as the damping ratio and
// must lie in (0, 2]; second_moment then accumulates |g| instead of g^2.
struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::int64_t step_count = 0;
    double alpha = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    AdamState() = default;
    AdamState(std::size_t n, double alpha, double beta1, double beta2, double eps);

    std::size_t size() const { return first_moment.size(); }
};

// Standard Adam with bias correction (reference baseline).
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

// Adam-style prototype of Dyna: the moment updates are replaced so the
// damped velocity divides by the |g|-based frequency estimate; state.beta2
// acts as the damping ratio.
void dyna_prototype_step(AdamState& state, std::span<double> params,
                         std::span<const double> grads);

} // namespace dyna
