#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "cising/compressed.hpp"
#include "cising/matchgate.hpp"
#include "cising/statevector.hpp"

using namespace cising;

namespace {

std::vector<MatchGate> v0_circuit(int n, double dt) {
    std::vector<MatchGate> gates;
    for (int k = 1; k <= n - 1; ++k) gates.push_back(z_rotation_left(dt, k));
    gates.push_back(z_rotation_right(dt, n - 1));
    return gates;
}

std::vector<MatchGate> vl_circuit(int n, double theta) {
    std::vector<MatchGate> gates;
    for (int k = 1; k <= n - 1; ++k) gates.push_back(xx_gate(theta, k));
    return gates;
}

std::vector<double> uniform_grid(double j_max, int points) {
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = j_max * i / (points - 1);
    return grid;
}

}  // namespace

TEST_CASE("structured r0 reduces to identity and closed-form blocks") {
    CHECK(max_abs_diff(build_r0(3, 0.0).to_real_dense(), RealMatrix::identity(8)) == 0.0);

    const double dt = 0.7853981633974483;  // pi/4: quarter turn becomes a half turn
    const RealMatrix r = build_r0(1, dt).to_real_dense();
    CHECK(r(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("structured rotations match the matchgate-compiled ones") {
    const double dt = 0.05, x = 0.23;
    for (int m : {2, 3, 4}) {
        const int n = 1 << (m - 1);
        CHECK(max_abs_diff(build_r0(m, dt).to_real_dense(),
                           circuit_rotation(v0_circuit(n, dt), n)) <= 1e-12);
        CHECK(max_abs_diff(build_rl(m, x).to_real_dense(),
                           circuit_rotation(vl_circuit(n, x / 2), n)) <= 1e-12);
    }
}

TEST_CASE("structured rl fixed points and orthogonality") {
    const RealMatrix r = build_rl(2, 0.37).to_real_dense();
    CHECK(r(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r(3, 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(is_special_orthogonal(r, 1e-12));
    CHECK(max_abs_diff(build_rl(3, 0.0).to_real_dense(), RealMatrix::identity(8)) == 0.0);
    CHECK(is_special_orthogonal(build_r0(3, 0.41).to_real_dense(), 1e-12));
}

TEST_CASE("phase gate structure") {
    CHECK(max_abs_diff(build_ud(2, 0.0).to_dense(), ComplexMatrix::identity(4)) == 0.0);
    const ComplexMatrix u = build_ud(1, 3.141592653589793).to_dense();
    CHECK(u(0, 0).real() == doctest::Approx(1.0));
    CHECK(u(1, 1).real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(u(1, 1).imag()) <= 1e-12);
}

TEST_CASE("Tl equals the phase-gate times transposed-rl product entrywise") {
    const int mh = 2;
    const double x = 0.29;
    const ComplexMatrix tl =
        mat_mul(build_ud(mh, x).to_dense(), transpose(build_rl(mh, x).to_dense()));
    // fixed point 1 at (1,1); last diagonal entry e^{ix}; interleaved sines
    CHECK(tl(0, 0) == cplx{1.0});
    CHECK(tl(3, 3).real() == doctest::Approx(std::cos(x)).epsilon(1e-14));
    CHECK(tl(3, 3).imag() == doctest::Approx(std::sin(x)).epsilon(1e-14));
    CHECK(tl(1, 2).real() == doctest::Approx(std::sin(x)).epsilon(1e-14));
    CHECK(tl(2, 1).real() == doctest::Approx(-std::sin(x)).epsilon(1e-14));
}

TEST_CASE("structured applies agree with dense products") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int m = 3;
    const std::size_t d = 8;
    RealMatrix a(d, d);
    for (auto& v : a.data()) v = dist(rng);

    for (bool transposed : {false, true}) {
        for (const StructuredRotation& rot : {build_r0(m, 0.11), build_rl(m, 0.29)}) {
            RealMatrix dense = rot.to_real_dense();
            if (transposed) dense = transpose(dense);
            RealMatrix inplace = a;
            apply_left(rot, inplace, transposed);
            CHECK(max_abs_diff(inplace, mat_mul(dense, a)) <= 1e-13);
        }
    }

    ComplexMatrix w(d, d);
    for (auto& v : w.data()) v = cplx{dist(rng), dist(rng)};
    ComplexMatrix inplace = w;
    apply_left(build_ud(m, 0.53), inplace, false);
    CHECK(max_abs_diff(inplace, mat_mul(build_ud(m, 0.53).to_dense(), w)) <= 1e-13);

    ComplexMatrix noisy = w;
    apply_collective_z_left(noisy, 0.21, m);
    // dense (e^{i a Z})^(x)3
    const cplx i{0.0, 1.0};
    ComplexMatrix zrot(2, 2);
    zrot(0, 0) = std::exp(i * 0.21);
    zrot(1, 1) = std::exp(-i * 0.21);
    const ComplexMatrix dense = kron(std::vector<ComplexMatrix>{zrot, zrot, zrot});
    CHECK(max_abs_diff(noisy, mat_mul(dense, w)) <= 1e-13);
}

TEST_CASE("pairing unitary passes its checks and the tampered one fails") {
    for (int m : {2, 3, 4, 5, 6}) {
        const ComplexMatrix v = build_v(m);
        CHECK(unitarity_residual(v) <= 1e-13);
    }
    const ComplexMatrix bad = build_v_tampered(3);
    CHECK(unitarity_residual(bad) > 1e-6);
}

TEST_CASE("appendix identities hold on sampled steps") {
    {
        const AppendixBReport rep = verify_appendix_b(2, {0.1, 0.15, 0.2, 0.25, 0.3}, 0.05, 1e-10);
        CHECK(rep.all_pass);
        for (const auto& item : rep.items) CHECK(item.residual <= 1e-12);
    }
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> angle(0.0, 0.2);
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(angle(rng));
    const AppendixBReport rep = verify_appendix_b(3, xs, angle(rng) + 1e-3, 1e-10);
    CHECK(rep.all_pass);
}

TEST_CASE("tampered pairing unitary fails identities a and d") {
    const AppendixBReport rep =
        verify_appendix_b(2, {0.1, 0.2}, 0.05, 1e-10, Tamper::flip_v_sign);
    CHECK_FALSE(rep.all_pass);
    bool a_failed = false, d_failed = false;
    for (const auto& item : rep.items) {
        if (item.identity == "a-v-unitary") a_failed = !item.pass;
        if (item.identity == "d-s-conjugation") d_failed = !item.pass;
    }
    CHECK(a_failed);
    CHECK(d_failed);
}

TEST_CASE("compressed evolutions start at M = 1 and match each other") {
    for (int n : {2, 4, 8}) {
        const IsingSpec spec(n, 2.0);
        const TrotterSchedule sched = TrotterSchedule::from_time_steps(10.0, 200, 2.0);
        const std::vector<double> grid = uniform_grid(2.0, 11);
        const MagnetizationCurve m_curve = compressed_evolution_m(spec, sched, grid);
        const MagnetizationCurve mhat_curve = compressed_evolution_mhat(spec, sched, grid, {});
        CHECK(m_curve.magnetization.front() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mhat_curve.magnetization.front() == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(m_curve.magnetization[i] - mhat_curve.magnetization[i]) <= 1e-10);
        }
    }
}

TEST_CASE("gate exactness against the statevector oracle") {
    for (int n : {2, 4, 8}) {
        const IsingSpec spec(n, 2.0);
        for (double total_time : {10.0, 30.0}) {
            const TrotterSchedule sched =
                TrotterSchedule::from_time_dt(total_time, 0.05, 2.0);
            const std::vector<double> grid = uniform_grid(2.0, 9);
            const MagnetizationCurve mhat = compressed_evolution_mhat(spec, sched, grid, {});
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double sv = trotter_magnetization(n, sched, grid[i]);
                CHECK(std::abs(mhat.magnetization[i] - sv) <= 1e-9);
            }
        }
    }
}

TEST_CASE("adiabatic point value at n=2") {
    const IsingSpec spec(2, 2.0);
    const TrotterSchedule sched = TrotterSchedule::from_time_steps(100.0, 2000, 2.0);
    const MagnetizationCurve curve = compressed_evolution_mhat(spec, sched, {0.0, 1.0}, {});
    CHECK(std::abs(curve.magnetization[1] - 2.0 / std::sqrt(5.0)) <= 0.01);
}

TEST_CASE("accumulated products stay orthogonal at checkpoints") {
    const IsingSpec spec(8, 2.0);
    const TrotterSchedule sched = TrotterSchedule::from_time_steps(30.0, 600, 2.0);
    CompressedState state(spec, sched, CompressedState::Mode::m_register);
    for (int cp = 1; cp <= 6; ++cp) {
        state.advance_to(cp * 100);
        CHECK(state.unitarity_residual() <= 1e-8);
    }
    CompressedState wstate(spec, sched, CompressedState::Mode::mhat_register);
    wstate.advance_to(600);
    CHECK(wstate.unitarity_residual() <= 1e-9);
}

TEST_CASE("structured applies cost O(d^2) per step and one pass per sweep") {
    const IsingSpec spec(16, 2.0);
    const TrotterSchedule sched = TrotterSchedule::from_time_steps(10.0, 100, 2.0);
    const std::vector<double> grid = uniform_grid(2.0, 11);

    CompressedState state(spec, sched, CompressedState::Mode::mhat_register);
    state.advance_to(sched.steps);
    const std::size_t d = state.dim();
    // per step: two Givens passes (4d^2 ops each at most) plus one diagonal
    // row scale; comfortably below 10*d^2
    CHECK(state.stats().steps == static_cast<std::uint64_t>(sched.steps));
    CHECK(state.stats().scalar_ops <= 10 * d * d * state.stats().steps);

    // a full sweep advances each ramp step exactly once regardless of the
    // number of checkpoints
    CompressedState sweep(spec, sched, CompressedState::Mode::m_register);
    for (double j : grid) sweep.advance_to(steps_for(sched, j));
    CHECK(sweep.stats().steps == static_cast<std::uint64_t>(sched.steps));
}

TEST_CASE("noise-free runs are bit-identical and seeds are reproducible") {
    const IsingSpec spec(8, 2.0);
    const TrotterSchedule sched = TrotterSchedule::from_time_steps(30.0, 600, 2.0);
    const std::vector<double> grid = uniform_grid(2.0, 21);

    const MagnetizationCurve a = compressed_evolution_mhat(spec, sched, grid, {});
    const MagnetizationCurve b = compressed_evolution_mhat(spec, sched, grid, {});
    CHECK(std::memcmp(a.magnetization.data(), b.magnetization.data(),
                      a.magnetization.size() * sizeof(double)) == 0);

    const NoiseSpec noise{true, 1e-2, 42};
    const MagnetizationCurve c = compressed_evolution_mhat(spec, sched, grid, noise);
    const MagnetizationCurve d = compressed_evolution_mhat(spec, sched, grid, noise);
    CHECK(std::memcmp(c.magnetization.data(), d.magnetization.data(),
                      c.magnetization.size() * sizeof(double)) == 0);

    const NoiseSpec other{true, 1e-2, 43};
    const MagnetizationCurve e = compressed_evolution_mhat(spec, sched, grid, other);
    double diff = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        diff = std::max(diff, std::abs(c.magnetization[i] - e.magnetization[i]));
    }
    CHECK(diff > 0.0);
}

TEST_CASE("noise draws one angle per step within the requested range") {
    const IsingSpec spec(4, 2.0);
    const TrotterSchedule sched = TrotterSchedule::from_time_steps(10.0, 50, 2.0);
    const NoiseSpec noise{true, 1e-3, 7};
    CompressedState state(spec, sched, CompressedState::Mode::mhat_register, noise);
    state.advance_to(50);
    CHECK(state.noise_angles().size() == 50);
    for (double a : state.noise_angles()) {
        CHECK(a >= 0.0);
        CHECK(a <= 1e-3);
    }
}

TEST_CASE("zero-coupling checkpoint returns exactly one even with noise") {
    const IsingSpec spec(8, 2.0);
    const TrotterSchedule sched = TrotterSchedule::from_time_steps(30.0, 600, 2.0);
    const NoiseSpec noise{true, 0.0, 3};
    const MagnetizationCurve curve = compressed_evolution_mhat(spec, sched, {0.0}, noise);
    CHECK(curve.magnetization[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("checkpoints must be sorted") {
    const IsingSpec spec(4, 2.0);
    const TrotterSchedule sched = TrotterSchedule::from_time_steps(10.0, 100, 2.0);
    CHECK_THROWS_AS(compressed_evolution_m(spec, sched, {1.0, 0.5}), std::invalid_argument);
}
