#include <doctest.h>

#include <cmath>
#include <random>

#include "cising/statevector.hpp"

using namespace cising;

TEST_CASE("z phase steps only change phases") {
    const TrotterSchedule s = TrotterSchedule::from_time_steps(10.0, 200, 2.0);
    StateVector psi(3);
    psi.apply_step({StepTag::full_z, 0, s.dt}, s);
    CHECK(std::abs(psi.amplitudes()[0]) == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 1; k <= 3; ++k) {
        CHECK(std::abs(psi.z_expectation(k)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("xx step on |00> produces cos|00> - i sin|11>") {
    const TrotterSchedule s = TrotterSchedule::from_time_steps(10.0, 200, 2.0);
    const double theta = 0.37;
    StateVector psi(2);
    psi.apply_step({StepTag::xx_ramp, 1, theta}, s);
    CHECK(psi.amplitudes()[0].real() == doctest::Approx(std::cos(theta)).epsilon(1e-14));
    CHECK(psi.amplitudes()[0].imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(psi.amplitudes()[3].real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(psi.amplitudes()[3].imag() == doctest::Approx(-std::sin(theta)).epsilon(1e-14));
    CHECK(std::abs(psi.amplitudes()[1]) == 0.0);
    CHECK(std::abs(psi.amplitudes()[2]) == 0.0);
}

TEST_CASE("every step preserves the norm") {
    const TrotterSchedule s = TrotterSchedule::from_time_steps(10.0, 200, 2.0);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StateVector psi(4);
    for (auto& a : psi.amplitudes()) a = cplx{dist(rng), dist(rng)};
    const double inv = 1.0 / psi.norm();
    for (auto& a : psi.amplitudes()) a *= inv;
    for (const GateStep& g : trotter_plan(s, 2.0)) psi.apply_step(g, s);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("odd and even xx sublayers commute") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int n = 5;
    StateVector a(n);
    for (auto& v : a.amplitudes()) v = cplx{dist(rng), dist(rng)};
    const double inv = 1.0 / a.norm();
    for (auto& v : a.amplitudes()) v *= inv;
    StateVector b = a;

    const double theta = 0.31;
    const double c = std::cos(theta), s = std::sin(theta);
    ComplexMatrix xx(4, 4);
    const cplx mis{0.0, -s};
    xx(0, 0) = xx(1, 1) = xx(2, 2) = xx(3, 3) = c;
    xx(0, 3) = xx(3, 0) = xx(1, 2) = xx(2, 1) = mis;
    // odd first on a
    for (int k = 1; k <= n - 1; k += 2) a.apply_two_qubit(xx, k);
    for (int k = 2; k <= n - 1; k += 2) a.apply_two_qubit(xx, k);
    // even first on b
    for (int k = 2; k <= n - 1; k += 2) b.apply_two_qubit(xx, k);
    for (int k = 1; k <= n - 1; k += 2) b.apply_two_qubit(xx, k);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        diff = std::max(diff, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
    }
    CHECK(diff <= 1e-12);
}

TEST_CASE("trotter magnetization endpoints") {
    const TrotterSchedule s = TrotterSchedule::from_time_steps(30.0, 600, 2.0);
    CHECK(trotter_magnetization(4, s, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

    const TrotterSchedule slow = TrotterSchedule::from_time_steps(100.0, 2000, 2.0);
    CHECK(std::abs(trotter_magnetization(2, slow, 1.0) - 2.0 / std::sqrt(5.0)) <= 0.01);
}

TEST_CASE("eigenstate magnetization against closed forms") {
    CHECK(eigenstate_magnetization(2, 1.0, Branch::connected) ==
          doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-12));
    CHECK(eigenstate_magnetization(2, 0.0, Branch::connected) == doctest::Approx(1.0));
    CHECK(eigenstate_magnetization(2, 0.0, Branch::ground) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(eigenstate_magnetization(16, 1.0, Branch::ground), std::invalid_argument);
}

TEST_CASE("degenerate extremal eigenvalues are rejected") {
    RealMatrix h(4, 4);
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    h(2, 2) = 0.0;
    h(3, 3) = -1.0;
    CHECK_THROWS_AS(extremal_eigenstate_magnetization(h, 2, Branch::connected),
                    std::runtime_error);
    CHECK_NOTHROW(extremal_eigenstate_magnetization(h, 2, Branch::ground));
}

TEST_CASE("statevector cap") {
    CHECK_THROWS_AS(StateVector(13), std::invalid_argument);
}
