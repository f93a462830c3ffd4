#include "dyna/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dyna::dynamics {

namespace {

void check_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument(std::string("non-finite ") + what);
    }
}

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

SpringMassSystem::SpringMassSystem(double mass_, double stiffness_, double zeta_)
    : mass(mass_), stiffness(stiffness_), zeta(zeta_) {
    if (!(mass > 0.0)) {
        throw std::invalid_argument("SpringMassSystem: mass must be > 0");
    }
    if (!(stiffness > 0.0)) {
        throw std::invalid_argument("SpringMassSystem: stiffness must be > 0");
    }
    if (!(zeta >= 0.0)) {
        throw std::invalid_argument("SpringMassSystem: damping ratio must be >= 0");
    }
}

double angular_frequency(const SpringMassSystem& sys) {
    return std::sqrt(sys.stiffness / sys.mass);
}

double analytic_undamped(double amplitude, double phase, double omega, double t) {
    if (!(omega > 0.0)) {
        throw std::invalid_argument("analytic_undamped: omega must be > 0");
    }
    return amplitude * std::cos(omega * t + phase);
}

State central_difference_step(const SpringMassSystem& sys, double x, double v_prev_half,
                              double h) {
    check_finite(x, "position");
    check_finite(v_prev_half, "velocity");
    if (!(h > 0.0)) {
        throw std::invalid_argument("central_difference_step: h must be > 0");
    }
    const double a = -(sys.stiffness / sys.mass) * x;
    const double v_next = v_prev_half + a * h;
    return State{x + v_next * h, v_next};
}

CriticalTimestep critical_timestep(double omega, double zeta) {
    if (!(omega > 0.0)) {
        throw std::invalid_argument("critical_timestep: omega must be > 0");
    }
    if (!(zeta >= 0.0)) {
        throw std::invalid_argument("critical_timestep: damping ratio must be >= 0");
    }
    if (zeta == 0.0) {
        return CriticalTimestep{2.0 / omega, false};
    }
    if (zeta >= 1.0) {
        // Damped expression undefined; fall back to the undamped bound.
        return CriticalTimestep{2.0 / omega, false};
    }
    return CriticalTimestep{2.0 / (omega * std::sqrt(1.0 - zeta * zeta)), true};
}

double relaxation_beta(double zeta, double omega, double h) {
    if (!(zeta >= 0.0) || !(omega >= 0.0) || !(h >= 0.0)) {
        throw std::invalid_argument("relaxation_beta: inputs must be >= 0");
    }
    const double zwh = zeta * omega * h;
    return 1.0 - 2.0 * zwh / (1.0 + zwh);
}

State dynamic_relaxation_step(const SpringMassSystem& sys, double x, double v_prev_half,
                              double h) {
    check_finite(x, "position");
    check_finite(v_prev_half, "velocity");
    if (!(h > 0.0)) {
        throw std::invalid_argument("dynamic_relaxation_step: h must be > 0");
    }
    if (sys.zeta == 0.0) {
        throw std::invalid_argument("dynamic_relaxation_step: damping ratio must be > 0");
    }
    const double omega = angular_frequency(sys);
    const double beta = relaxation_beta(sys.zeta, omega, h);
    const double v_next = beta * v_prev_half - (1.0 - beta) / (2.0 * sys.zeta) * omega * x;
    return State{x + v_next * h, v_next};
}

Trajectory simulate(const SpringMassSystem& sys, Integrator integrator, double x0, double h,
                    std::int64_t n_steps) {
    check_finite(x0, "initial position");
    if (!(h > 0.0)) {
        throw std::invalid_argument("simulate: h must be > 0");
    }
    if (n_steps < 1) {
        throw std::invalid_argument("simulate: n_steps must be >= 1");
    }

    Trajectory trajectory;
    trajectory.h = h;
    trajectory.samples.reserve(static_cast<std::size_t>(n_steps));

    const double limit = 1e6 * std::abs(x0);
    double x = x0;
    double v_half = 0.0; // v_{-h/2}
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const State next = integrator == Integrator::CentralDifference
                               ? central_difference_step(sys, x, v_half, h)
                               : dynamic_relaxation_step(sys, x, v_half, h);
        trajectory.samples.push_back(
            {static_cast<double>(i) * h, x, next.v_half});
        if (!std::isfinite(next.x) || std::abs(next.x) > limit) {
            trajectory.diverged = true;
            break;
        }
        x = next.x;
        v_half = next.v_half;
    }
    return trajectory;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "t,x,v_half\n";
    for (const TrajectorySample& s : trajectory.samples) {
        out << format_g17(s.t) << ',' << format_g17(s.x) << ',' << format_g17(s.v_half)
            << '\n';
    }
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t,x,v_half") {
        throw std::runtime_error("trajectory csv: missing t,x,v_half header");
    }
    Trajectory trajectory;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        TrajectorySample s{};
        char c1 = 0, c2 = 0;
        if (!(row >> s.t >> c1 >> s.x >> c2 >> s.v_half) || c1 != ',' || c2 != ',') {
            throw std::runtime_error("trajectory csv: malformed row: " + line);
        }
        trajectory.samples.push_back(s);
    }
    if (trajectory.samples.size() > 1) {
        trajectory.h = trajectory.samples[1].t - trajectory.samples[0].t;
    }
    return trajectory;
}

} // namespace dyna::dynamics
