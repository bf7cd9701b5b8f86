#pragma once

#include <vector>

#include "cising/linalg.hpp"

namespace cising {

/// Nearest-neighbor two-qubit gate A (+) B, with A acting on the even parity
/// subspace span{|00>,|11>} and B on the odd parity subspace span{|01>,|10>}.
/// A and B must be unitary with equal determinants.
struct MatchGate {
    ComplexMatrix a;  // 2x2, even parity block
    ComplexMatrix b;  // 2x2, odd parity block
    int position;     // 1-based index of the left qubit of the pair

    MatchGate(ComplexMatrix a_in, ComplexMatrix b_in, int position_in);

    /// Dense 4x4 unitary in the |00>,|01>,|10>,|11> basis.
    ComplexMatrix unitary() const;
};

/// e^{-i theta X(x)X} at pair (k, k+1).
MatchGate xx_gate(double theta, int k);
/// e^{-i theta Z} on the left/right qubit of pair (k, k+1), as a matchgate.
MatchGate z_rotation_left(double theta, int k);
MatchGate z_rotation_right(double theta, int k);

/// Dense realization of the Jordan-Wigner operator c_j on an n-qubit chain:
/// Z^(k-1) (x) {X or Y} (x) I^(n-k) with k = ceil(j/2), X for odd j. Exists
/// for verification only; n is capped at 12.
ComplexMatrix jordan_wigner(int j, int n);

/// 4x4 rotation block of a two-qubit gate, obtained by expanding U+ c_j U in
/// the c-operator basis at n=2. Rejects (with the expansion residual) any
/// gate that is not a matchgate.
RealMatrix rotation_block_from_unitary(const ComplexMatrix& u4, double tol = 1e-10);

/// The SO(2n) rotation of a matchgate at position k: the 4x4 block embedded
/// at rows/cols 2k-1..2k+2 of the identity.
RealMatrix matchgate_rotation(const MatchGate& g, int n);

/// Product rotation R = R_N ... R_1 of an ordered circuit (gates[0] applied
/// first).
RealMatrix circuit_rotation(const std::vector<MatchGate>& circuit, int n);

/// Correlation matrix S of the computational basis state |x>: antisymmetric,
/// block-diagonal with blocks (-1)^{x_k} [[0,1],[-1,0]].
RealMatrix correlation_matrix(const std::vector<int>& bits);

/// <Z_k> after running the circuit on |x>: (R S R^T)_{2k-1,2k}.
double simulate_mgc(const std::vector<MatchGate>& circuit, const std::vector<int>& bits, int k);

/// Sum_k A_{2k-1,2k} of a real antisymmetric matrix, evaluated through the
/// trace form -1/2 tr(A (I (x) [[0,1],[-1,0]])). Rejects non-antisymmetric
/// input.
double antisym_trace_average(const RealMatrix& a, double tol = 1e-10);

}  // namespace cising
