#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dyna::dynamics {

// Single-coordinate damped oscillator. zeta is the damping ratio relative
// to critical (c = 2 * zeta * sqrt(m * k)).
struct SpringMassSystem {
    double mass;
    double stiffness;
    double zeta;

    SpringMassSystem(double mass, double stiffness, double zeta);
};

double angular_frequency(const SpringMassSystem& sys);

// Position of the undamped harmonic motion amplitude*cos(omega*t + phase).
double analytic_undamped(double amplitude, double phase, double omega, double t);

// (position, staggered velocity) pair as produced by one explicit step.
struct State {
    double x;
    double v_half;
};

// One undamped central-difference step from (x_t, v_{t-h/2}) to
// (x_{t+h}, v_{t+h/2}).
State central_difference_step(const SpringMassSystem& sys, double x, double v_prev_half,
                              double h);

// Largest stable explicit timestep. For zeta >= 1 the damped expression is
// undefined; the undamped bound is returned with damped_form = false.
struct CriticalTimestep {
    double value;
    bool damped_form;
};
CriticalTimestep critical_timestep(double omega, double zeta);

// Velocity decay factor 1 - 2*zeta*omega*h / (1 + zeta*omega*h).
double relaxation_beta(double zeta, double omega, double h);

// One dynamic-relaxation step: the damped EMA velocity update followed by
// the position update. Requires sys.zeta > 0.
State dynamic_relaxation_step(const SpringMassSystem& sys, double x, double v_prev_half,
                              double h);

enum class Integrator { CentralDifference, DynamicRelaxation };

struct TrajectorySample {
    double t;
    double x;
    double v_half; // staggered velocity v_{t+h/2} leaving this sample
};

struct Trajectory {
    double h = 0.0;
    std::vector<TrajectorySample> samples;
    bool diverged = false;
};

// Integrate n_steps from x0 with zero initial staggered velocity. Stops
// early and flags divergence once |x| exceeds 1e6 * |x0|.
Trajectory simulate(const SpringMassSystem& sys, Integrator integrator, double x0, double h,
                    std::int64_t n_steps);

// CSV with header t,x,v_half; 17 significant digits per value.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory_csv(std::istream& in);

} // namespace dyna::dynamics
