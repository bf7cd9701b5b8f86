#include "cising/statevector.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cising/indexing.hpp"

namespace cising {

namespace {
const cplx kI{0.0, 1.0};
}

StateVector::StateVector(int n) : n_(n) {
    if (n < 1 || n > 12) throw std::invalid_argument("StateVector: n must be in 1..12");
    amps_.assign(std::size_t{1} << n, cplx{});
    amps_[0] = 1.0;
}

void StateVector::apply_z_phases(double tau) {
    // e^{-i tau sum Z_k}: basis state s picks up e^{-i tau (n - 2 wt(s))}.
    const std::size_t dim = amps_.size();
    for (std::size_t s = 0; s < dim; ++s) {
        amps_[s] *= std::exp(-kI * (tau * (n_ - 2 * bit_weight(s))));
    }
}

void StateVector::apply_xx_layer(double theta) {
    // e^{-i theta X_k X_{k+1}} for every neighbor pair; all terms commute,
    // applied odd-first then even for definiteness.
    const double c = std::cos(theta), s = std::sin(theta);
    auto pair_gate = [&](int k) {
        const std::size_t mask =
            (std::size_t{1} << (n_ - k)) | (std::size_t{1} << (n_ - k - 1));
        const std::size_t dim = amps_.size();
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t j = i ^ mask;
            if (i < j) {
                const cplx ai = amps_[i], aj = amps_[j];
                amps_[i] = c * ai - kI * s * aj;
                amps_[j] = c * aj - kI * s * ai;
            }
        }
    };
    for (int k = 1; k <= n_ - 1; k += 2) pair_gate(k);
    for (int k = 2; k <= n_ - 1; k += 2) pair_gate(k);
}

void StateVector::apply_step(const GateStep& step, const TrotterSchedule&) {
    switch (step.tag) {
        case StepTag::half_z:
        case StepTag::full_z:
            apply_z_phases(step.angle);
            break;
        case StepTag::xx_ramp:
            apply_xx_layer(step.angle);
            break;
    }
}

void StateVector::apply_two_qubit(const ComplexMatrix& u4, int k) {
    if (u4.rows() != 4 || u4.cols() != 4) {
        throw std::invalid_argument("apply_two_qubit: 4x4 matrix required");
    }
    if (k < 1 || k > n_ - 1) throw std::invalid_argument("apply_two_qubit: pair out of range");
    const std::size_t hi = std::size_t{1} << (n_ - k);
    const std::size_t lo = std::size_t{1} << (n_ - k - 1);
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & (hi | lo)) continue;
        const std::size_t idx[4] = {base, base | lo, base | hi, base | hi | lo};
        cplx in[4];
        for (int i = 0; i < 4; ++i) in[i] = amps_[idx[i]];
        for (int i = 0; i < 4; ++i) {
            cplx acc{};
            for (int j = 0; j < 4; ++j) acc += u4(i, j) * in[j];
            amps_[idx[i]] = acc;
        }
    }
}

double StateVector::z_expectation(int k) const {
    if (k < 1 || k > n_) throw std::invalid_argument("z_expectation: site out of range");
    double v = 0.0;
    for (std::size_t s = 0; s < amps_.size(); ++s) {
        const double p = std::norm(amps_[s]);
        v += qubit_bit(s, k, n_) ? -p : p;
    }
    return v;
}

double StateVector::magnetization() const {
    double v = 0.0;
    for (std::size_t s = 0; s < amps_.size(); ++s) {
        v += std::norm(amps_[s]) * (n_ - 2 * bit_weight(s));
    }
    return v / n_;
}

double StateVector::norm() const {
    double v = 0.0;
    for (const cplx& a : amps_) v += std::norm(a);
    return std::sqrt(v);
}

double trotter_magnetization(int n, const TrotterSchedule& s, double j) {
    StateVector psi(n);
    for (const GateStep& step : trotter_plan(s, j)) psi.apply_step(step, s);
    return psi.magnetization();
}

RealMatrix dense_ising_hamiltonian(int n, double j) {
    if (n < 1 || n > 12) throw std::invalid_argument("dense_ising_hamiltonian: n must be in 1..12");
    const std::size_t dim = std::size_t{1} << n;
    RealMatrix h(dim, dim);
    for (std::size_t s = 0; s < dim; ++s) h(s, s) = n - 2 * bit_weight(s);
    for (int k = 1; k <= n - 1; ++k) {
        const std::size_t mask =
            (std::size_t{1} << (n - k)) | (std::size_t{1} << (n - k - 1));
        for (std::size_t s = 0; s < dim; ++s) h(s, s ^ mask) += j;
    }
    return h;
}

double extremal_eigenstate_magnetization(const RealMatrix& h, int n, Branch branch) {
    const EigSym eig = eig_sym_real(h);
    const std::size_t dim = h.rows();
    // connected branch: top of the spectrum (the |0...0>-connected state);
    // ground branch: bottom.
    const std::size_t col = (branch == Branch::connected) ? 0 : dim - 1;
    const double e0 = eig.eigenvalues[col];
    const double e1 = (branch == Branch::connected) ? eig.eigenvalues[1] : eig.eigenvalues[dim - 2];
    if (std::abs(e0 - e1) < 1e-9) {
        std::ostringstream os;
        os << "extremal eigenstate is degenerate within 1e-9 (splitting " << std::abs(e0 - e1)
           << ")";
        throw std::runtime_error(os.str());
    }
    double m = 0.0;
    for (std::size_t s = 0; s < dim; ++s) {
        const double amp = eig.vectors(s, col);
        m += amp * amp * (n - 2 * bit_weight(s));
    }
    return m / n;
}

double eigenstate_magnetization(int n, double j, Branch branch) {
    if (n < 2 || n > 10) {
        throw std::invalid_argument("eigenstate_magnetization: n must be in 2..10");
    }
    return extremal_eigenstate_magnetization(dense_ising_hamiltonian(n, j), n, branch);
}

}  // namespace cising
