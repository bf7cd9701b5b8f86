#pragma once

#include <vector>

#include "cising/curve.hpp"
#include "cising/linalg.hpp"
#include "cising/schedule.hpp"

namespace cising {

/// Brute-force 2^n amplitude vector. Exists as the ground truth for sign
/// conventions and equivalence tests; capped at n = 12.
class StateVector {
  public:
    explicit StateVector(int n);  // |0...0>

    int n() const { return n_; }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes() { return amps_; }

    void apply_step(const GateStep& step, const TrotterSchedule& s);
    /// Arbitrary two-qubit gate on sites (k, k+1), 1-based, site 1 = MSB.
    void apply_two_qubit(const ComplexMatrix& u4, int k);

    double z_expectation(int k) const;
    double magnetization() const;
    double norm() const;

  private:
    int n_;
    std::vector<cplx> amps_;

    void apply_z_phases(double tau);
    void apply_xx_layer(double theta);
};

/// Runs the Trotter plan up to coupling J from |0>^n and returns the average
/// Z expectation.
double trotter_magnetization(int n, const TrotterSchedule& s, double j);

/// Dense 2^n x 2^n Hamiltonian H(J), real symmetric in the computational
/// basis.
RealMatrix dense_ising_hamiltonian(int n, double j);

/// Magnetization of the extremal eigenstate of the dense H(J) on the chosen
/// branch (n <= 10). Rejects a degenerate extremal eigenvalue.
double eigenstate_magnetization(int n, double j, Branch branch);

/// Z-average of the extremal eigenvector of an arbitrary dense Hamiltonian
/// over n sites; the degeneracy check lives here.
double extremal_eigenstate_magnetization(const RealMatrix& h, int n, Branch branch);

}  // namespace cising
