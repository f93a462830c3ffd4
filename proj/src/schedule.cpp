#include "dyna/schedule.hpp"

#include <stdexcept>
#include <string>

namespace dyna {

namespace {

void check_zeta(double zeta, const char* what) {
    if (!(zeta > 0.0 && zeta <= 2.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in (0, 2], got " +
                                    std::to_string(zeta));
    }
}

} // namespace

DampingSchedule::DampingSchedule(Kind kind, double zeta_start, double zeta_end,
                                 std::int64_t ramp_steps)
    : kind_(kind), zeta_start_(zeta_start), zeta_end_(zeta_end), ramp_steps_(ramp_steps) {}

DampingSchedule DampingSchedule::constant(double zeta) {
    check_zeta(zeta, "damping ratio");
    return DampingSchedule(Kind::Constant, zeta, zeta, 1);
}

DampingSchedule DampingSchedule::quadratic_ramp(double zeta_start, double zeta_end,
                                                std::int64_t ramp_steps) {
    check_zeta(zeta_start, "ramp start damping ratio");
    check_zeta(zeta_end, "ramp end damping ratio");
    if (ramp_steps < 1) {
        throw std::invalid_argument("ramp step count must be >= 1, got " +
                                    std::to_string(ramp_steps));
    }
    return DampingSchedule(Kind::QuadraticRamp, zeta_start, zeta_end, ramp_steps);
}

double DampingSchedule::at(std::int64_t t) const {
    if (t < 0) {
        throw std::invalid_argument("schedule timestep must be >= 0, got " +
                                    std::to_string(t));
    }
    if (kind_ == Kind::Constant) {
        return zeta_start_;
    }
    if (t >= ramp_steps_) {
        return zeta_end_; // exact clamp
    }
    // Interpolate in u = 1/(2*zeta) space: u(t) = u0 + (u1 - u0) * (t/T)^2.
    const double u0 = 1.0 / (2.0 * zeta_start_);
    const double u1 = 1.0 / (2.0 * zeta_end_);
    const double r = static_cast<double>(t) / static_cast<double>(ramp_steps_);
    const double u = u0 + (u1 - u0) * (r * r);
    return 1.0 / (2.0 * u);
}

double damping_ratio_at(const DampingSchedule& schedule, std::int64_t t) {
    return schedule.at(t);
}

} // namespace dyna
