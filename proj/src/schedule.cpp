#include "cising/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cising {

IsingSpec::IsingSpec(int n_in, double j_max_in) : n(n_in), j_max(j_max_in) {
    if (n < 2 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("IsingSpec: n must be a power of two >= 2");
    }
    if (!(j_max > 0)) throw std::invalid_argument("IsingSpec: j_max must be positive");
}

int IsingSpec::mhat() const {
    int m = 0;
    for (int v = n; v > 1; v >>= 1) ++m;
    return m;
}

namespace {
TrotterSchedule make(double total_time, int steps, double j_max) {
    if (steps < 1) throw std::invalid_argument("TrotterSchedule: steps must be >= 1");
    if (!(total_time > 0)) throw std::invalid_argument("TrotterSchedule: total time must be positive");
    if (!(j_max > 0)) throw std::invalid_argument("TrotterSchedule: j_max must be positive");
    return TrotterSchedule{total_time, steps, total_time / steps, j_max};
}
}  // namespace

TrotterSchedule TrotterSchedule::from_time_steps(double total_time, int steps, double j_max) {
    return make(total_time, steps, j_max);
}

TrotterSchedule TrotterSchedule::from_time_dt(double total_time, double dt, double j_max) {
    if (!(dt > 0)) throw std::invalid_argument("TrotterSchedule: dt must be positive");
    const double raw = total_time / dt;
    const int steps = static_cast<int>(std::llround(raw));
    if (steps < 1 || std::abs(raw - steps) > 1e-9 * std::max(1.0, raw)) {
        std::ostringstream os;
        os << "TrotterSchedule: T/dt = " << raw << " is not an integral step count";
        throw std::invalid_argument(os.str());
    }
    return make(total_time, steps, j_max);
}

TrotterSchedule TrotterSchedule::from_steps_dt(int steps, double dt, double j_max) {
    if (!(dt > 0)) throw std::invalid_argument("TrotterSchedule: dt must be positive");
    return make(steps * dt, steps, j_max);
}

double coupling_at(const TrotterSchedule& s, int l) {
    if (l < 0 || l > s.steps) throw std::invalid_argument("coupling_at: step index out of range");
    return s.j_max * l / s.steps;
}

int steps_for(const TrotterSchedule& s, double j) {
    if (j < -1e-12 || j > s.j_max * (1.0 + 1e-12)) {
        throw std::invalid_argument("steps_for: coupling outside [0, j_max]");
    }
    // std::nearbyint under the default rounding mode is round-half-to-even,
    // which keeps the step mapping deterministic across platforms.
    return static_cast<int>(std::nearbyint(j * s.steps / s.j_max));
}

std::vector<GateStep> trotter_plan(const TrotterSchedule& s, double j) {
    const int lj = steps_for(s, j);
    std::vector<GateStep> plan;
    if (lj == 0) return plan;
    plan.reserve(2 * lj + 1);
    plan.push_back({StepTag::half_z, 0, s.dt / 2});
    for (int l = 1; l <= lj; ++l) {
        plan.push_back({StepTag::xx_ramp, l, coupling_at(s, l) * s.dt});
        if (l < lj) plan.push_back({StepTag::full_z, 0, s.dt});
    }
    plan.push_back({StepTag::half_z, 0, s.dt / 2});
    return plan;
}

}  // namespace cising
