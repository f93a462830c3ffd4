#pragma once

#include <cstdint>

namespace dyna {

// Damping-ratio schedule evaluated at optimizer timesteps. A ramp
// interpolates 1/(2*zeta) quadratically in t/T between its endpoints and
// clamps exactly at zeta_end for t >= T. All emitted ratios lie in (0, 2].
class DampingSchedule {
public:
    enum class Kind { Constant, QuadraticRamp };

    static DampingSchedule constant(double zeta);
    static DampingSchedule quadratic_ramp(double zeta_start, double zeta_end,
                                          std::int64_t ramp_steps);

    double at(std::int64_t t) const;

    Kind kind() const { return kind_; }
    double zeta_start() const { return zeta_start_; }
    double zeta_end() const { return zeta_end_; }
    std::int64_t ramp_steps() const { return ramp_steps_; }

private:
    DampingSchedule(Kind kind, double zeta_start, double zeta_end,
                    std::int64_t ramp_steps);

    Kind kind_;
    double zeta_start_;
    double zeta_end_;
    std::int64_t ramp_steps_;
};

// Damping ratio emitted by `schedule` at timestep t (t >= 0).
double damping_ratio_at(const DampingSchedule& schedule, std::int64_t t);

} // namespace dyna
