#pragma once

#include <vector>

namespace cising {

/// Chain definition: H(J) = sum_i Z_i + J sum_i X_i X_{i+1}, open boundary,
/// n a power of two.
struct IsingSpec {
    int n;
    double j_max;

    IsingSpec(int n_in, double j_max_in);

    int mhat() const;       // log2(n)
    int m() const { return mhat() + 1; }
};

/// Linear adiabatic ramp J(l) = j_max * l / steps discretized into `steps`
/// Trotter steps of duration dt = total_time / steps.
struct TrotterSchedule {
    double total_time;
    int steps;
    double dt;
    double j_max;

    static TrotterSchedule from_time_steps(double total_time, int steps, double j_max);
    static TrotterSchedule from_time_dt(double total_time, double dt, double j_max);
    static TrotterSchedule from_steps_dt(int steps, double dt, double j_max);
};

/// J(l) = j_max * l / L for 0 <= l <= L.
double coupling_at(const TrotterSchedule& s, int l);

/// Number of ramp steps reaching coupling J: round(J * L / j_max),
/// half-to-even.
int steps_for(const TrotterSchedule& s, double j);

enum class StepTag { half_z, full_z, xx_ramp };

struct GateStep {
    StepTag tag;
    int l;         // ramp index, xx_ramp only (0 otherwise)
    double angle;  // half_z: dt/2, full_z: dt, xx_ramp: J(l)*dt
};

/// Second-order step sequence for the evolution up to coupling J, with
/// adjacent Z evolutions merged:
///   [HalfZ, XX(1), FullZ, XX(2), FullZ, ..., XX(L(J)), HalfZ]
/// (empty when L(J) = 0). List order is application order.
std::vector<GateStep> trotter_plan(const TrotterSchedule& s, double j);

}  // namespace cising
