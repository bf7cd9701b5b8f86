#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "cising/exact.hpp"
#include "cising/matchgate.hpp"
#include "cising/runner.hpp"
#include "cising/statevector.hpp"

namespace cising {

namespace {

const cplx kI{0.0, 1.0};

ComplexMatrix random_u2(std::mt19937_64& rng, double global_phase) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double theta = angle(rng) / 4.0;
    const double a = angle(rng), b = angle(rng);
    const cplx ph = std::exp(kI * global_phase);
    ComplexMatrix u(2, 2);
    u(0, 0) = ph * std::exp(kI * a) * std::cos(theta);
    u(0, 1) = ph * std::exp(kI * b) * std::sin(theta);
    u(1, 0) = -ph * std::exp(-kI * b) * std::sin(theta);
    u(1, 1) = ph * std::exp(-kI * a) * std::cos(theta);
    return u;
}

MatchGate random_matchgate(std::mt19937_64& rng, int position) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double phase = angle(rng);
    return MatchGate(random_u2(rng, phase), random_u2(rng, phase), position);
}

ComplexMatrix embed_gate(const ComplexMatrix& u4, int k, int n) {
    std::vector<ComplexMatrix> factors;
    for (int i = 1; i < k; ++i) factors.push_back(ComplexMatrix::identity(2));
    factors.push_back(u4);
    for (int i = k + 2; i <= n; ++i) factors.push_back(ComplexMatrix::identity(2));
    return kron(factors);
}

// max_j || U+ c_j U - sum_l R_jl c_l || for a dense circuit unitary.
double eq1_residual(const ComplexMatrix& u, const RealMatrix& r, int n) {
    const ComplexMatrix udag = conj_transpose(u);
    std::vector<ComplexMatrix> c;
    for (int j = 1; j <= 2 * n; ++j) c.push_back(jordan_wigner(j, n));
    double worst = 0.0;
    for (int j = 0; j < 2 * n; ++j) {
        ComplexMatrix lhs = mat_mul(mat_mul(udag, c[j]), u);
        for (int l = 0; l < 2 * n; ++l) {
            const double coeff = r(j, l);
            if (coeff == 0.0) continue;
            for (std::size_t p = 0; p < lhs.rows(); ++p)
                for (std::size_t q = 0; q < lhs.cols(); ++q) lhs(p, q) -= coeff * c[l](p, q);
        }
        worst = std::max(worst, max_abs(lhs));
    }
    return worst;
}

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

}  // namespace

VerifyReport run_verify(VerifyLevel level, Tamper tamper, std::ostream* progress) {
    VerifyReport report;
    auto add = [&](const std::string& name, double residual, double threshold) {
        report.checks.push_back({name, residual, threshold, residual <= threshold});
        if (progress) {
            *progress << (residual <= threshold ? "[PASS] " : "[FAIL] ") << name
                      << " residual=" << residual << " threshold=" << threshold << "\n";
        }
    };
    const bool full = level == VerifyLevel::full;
    std::mt19937_64 rng(20240215);

    {
        // Operator-expansion consistency for random matchgate circuits.
        double worst = 0.0;
        for (int n : {2, 3, 4}) {
            std::uniform_int_distribution<int> pos(1, n - 1);
            std::vector<MatchGate> circuit;
            ComplexMatrix u = ComplexMatrix::identity(std::size_t{1} << n);
            for (int g = 0; g < 6; ++g) {
                const MatchGate gate = random_matchgate(rng, pos(rng));
                u = mat_mul(embed_gate(gate.unitary(), gate.position, n), u);
                circuit.push_back(gate);
            }
            worst = std::max(worst, eq1_residual(u, circuit_rotation(circuit, n), n));
        }
        add("eq1-expansion", worst, 1e-10);
    }

    {
        const double dt = 0.05;
        double worst_r0 = 0.0, worst_rl = 0.0;
        for (int m : {2, 3}) {
            const int n = 1 << (m - 1);
            const RealMatrix compiled_r0 = circuit_rotation(v0_circuit(n, dt), n);
            const RealMatrix structured =
                build_r0_oriented(m, dt, tamper == Tamper::flip_r0_sign).to_real_dense();
            worst_r0 = std::max(worst_r0, max_abs_diff(compiled_r0, structured));
            const double x = 0.23;
            const RealMatrix compiled_rl = circuit_rotation(vl_circuit(n, x / 2), n);
            worst_rl = std::max(worst_rl, max_abs_diff(compiled_rl, build_rl(m, x).to_real_dense()));
        }
        add("r0-matches-compiled", worst_r0, 1e-12);
        add("rl-matches-compiled", worst_rl, 1e-12);
    }

    {
        double worst = 0.0;
        std::uniform_int_distribution<int> bit(0, 1);
        for (int n : {2, 5, 8}) {
            std::vector<int> bits(n);
            for (int& b : bits) b = bit(rng);
            const RealMatrix s = correlation_matrix(bits);
            worst = std::max(worst, max_abs_diff(mat_mul(s, s),
                                                 [&] {
                                                     RealMatrix neg = RealMatrix::identity(2 * n);
                                                     for (auto& v : neg.data()) v = -v;
                                                     return neg;
                                                 }()));
            worst = std::max(worst, max_abs_diff(transpose(s), [&] {
                                 RealMatrix neg = s;
                                 for (auto& v : neg.data()) v = -v;
                                 return neg;
                             }()));
        }
        add("correlation-structure", worst, 1e-12);
    }

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> entry(-1.0, 1.0);
        std::uniform_int_distribution<int> size(1, 8);
        for (int trial = 0; trial < 100; ++trial) {
            const int half = size(rng);
            RealMatrix a(2 * half, 2 * half);
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = i + 1; j < a.cols(); ++j) {
                    const double v = entry(rng);
                    a(i, j) = v;
                    a(j, i) = -v;
                }
            double direct = 0.0;
            for (int k = 0; k < half; ++k) direct += a(2 * k, 2 * k + 1);
            worst = std::max(worst, std::abs(direct - antisym_trace_average(a)));
        }
        add("antisym-trace", worst, 1e-12);
    }

    {
        std::vector<int> ms = {2, 3};
        if (full) ms.insert(ms.end(), {4, 5, 6});
        std::uniform_real_distribution<double> angle(0.0, 0.2);
        double worst = 0.0;
        for (int m : ms) {
            std::vector<double> xs;
            for (int i = 0; i < 8; ++i) xs.push_back(angle(rng));
            const AppendixBReport rep = verify_appendix_b(m, xs, 0.05, 1e-10, tamper);
            for (const auto& item : rep.items) worst = std::max(worst, item.residual);
        }
        add("appendix-b", worst, 1e-10);
    }

    {
        std::vector<int> ns = {2, 4};
        if (full) ns.push_back(8);
        double worst_sv = 0.0, worst_mm = 0.0;
        for (int n : ns) {
            const IsingSpec spec(n, 2.0);
            const TrotterSchedule sched = TrotterSchedule::from_time_steps(10.0, 200, 2.0);
            std::vector<double> grid;
            for (int i = 0; i <= 10; ++i) grid.push_back(2.0 * i / 10);
            const MagnetizationCurve mhat = compressed_evolution_mhat(spec, sched, grid, {});
            const MagnetizationCurve mreg = compressed_evolution_m(spec, sched, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                worst_sv = std::max(worst_sv, std::abs(mhat.magnetization[i] -
                                                       trotter_magnetization(n, sched, grid[i])));
                worst_mm = std::max(worst_mm,
                                    std::abs(mhat.magnetization[i] - mreg.magnetization[i]));
            }
        }
        add("gate-exact-vs-statevector", worst_sv, 1e-9);
        add("m-vs-mhat", worst_mm, 1e-10);
    }

    {
        const int n = full ? 8 : 4;
        const IsingSpec spec(n, 2.0);
        const TrotterSchedule sched = TrotterSchedule::from_time_steps(10.0, 200, 2.0);
        CompressedState state(spec, sched, CompressedState::Mode::m_register);
        double worst = 0.0;
        for (int cp = 1; cp <= 5; ++cp) {
            state.advance_to(cp * 40);
            worst = std::max(worst, state.unitarity_residual());
        }
        add("so-membership", worst, 1e-8);
    }

    {
        std::vector<int> ns = {2, 4, 8, 16, 32};
        if (full) ns.insert(ns.end(), {64, 128});
        std::uniform_real_distribution<double> j_dist(0.0, 3.0);
        double worst = 0.0;
        for (int n : ns) {
            const double j = j_dist(rng);
            const QuadraticForm q = build_quadratic_form(n, j);
            const EigSym eig = eig_sym_real(q.matrix);
            const double scale = std::max(1.0, std::abs(eig.eigenvalues.front()));
            for (int i = 0; i < n; ++i) {
                worst = std::max(worst, std::abs(eig.eigenvalues[i] +
                                                 eig.eigenvalues[2 * n - 1 - i]) /
                                            scale);
            }
        }
        add("pair-symmetry", worst, 1e-10);
    }

    {
        std::vector<int> ns = {2, 4};
        if (full) ns.push_back(8);
        double worst = 0.0;
        for (int n : ns) {
            for (double j : {0.0, 0.5, 1.0, 1.5, 2.0}) {
                for (Branch branch : {Branch::ground, Branch::connected}) {
                    worst = std::max(worst, std::abs(magnetization_exact(n, j, branch) -
                                                     eigenstate_magnetization(n, j, branch)));
                }
            }
        }
        add("exact-vs-dense", worst, 1e-9);
    }

    {
        const ModeSpectrum spec = diagonalize_modes(build_quadratic_form(2, 1.0));
        const double s5 = std::sqrt(5.0);
        double worst = std::abs(spec.lambdas[0] - (s5 + 1) / 2);
        worst = std::max(worst, std::abs(spec.lambdas[1] - (s5 - 1) / 2));
        worst = std::max(worst, std::abs(ground_energy(spec) + s5));
        worst = std::max(worst, std::abs(spectral_gap(spec) - (s5 - 1)));
        add("mode-eigen-analytic", worst, 1e-10);
    }

    if (full) {
        const IsingSpec spec(8, 2.0);
        const TrotterSchedule sched = TrotterSchedule::from_time_steps(100.0, 2000, 2.0);
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(2.0 * i / 40);
        const MagnetizationCurve mhat = compressed_evolution_mhat(spec, sched, grid, {});
        const MagnetizationCurve exact = exact_curve(8, grid, Branch::connected, 2.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, std::abs(mhat.magnetization[i] - exact.magnetization[i]));
        }
        add("adiabatic-vs-exact-n8", worst, 0.02);
    }

    report.all_pass = true;
    for (const auto& check : report.checks) report.all_pass = report.all_pass && check.pass;
    return report;
}

}  // namespace cising
