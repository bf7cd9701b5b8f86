#pragma once

#include <vector>

#include "cising/curve.hpp"
#include "cising/linalg.hpp"

namespace cising {

/// Quadratic fermionic form of H(J): 2n x 2n real symmetric, 2x2 diagonal
/// blocks -Z and superdiagonal blocks -(J/2)[[1,1],[-1,-1]].
struct QuadraticForm {
    int n;
    double coupling;
    RealMatrix matrix;
};

QuadraticForm build_quadratic_form(int n, double j);

/// Mode decomposition of the quadratic form. Eigenvalues come in (l, -l)
/// pairs; `basis` is orthogonal with columns (2l-1, 2l) holding the +lambda_l
/// eigenvector and its (I (x) X) image.
struct ModeSpectrum {
    int n;
    double coupling;
    std::vector<double> lambdas;  // descending, one per site, all >= 0
    RealMatrix basis;             // 2n x 2n orthogonal

    /// Interleaved eigenvalue ordering (+l_n, -l_n, ..., +l_0, -l_0).
    std::vector<double> interleaved() const;
};

/// Diagonalizes the form and enforces the pair structure. Rejects a spectrum
/// whose +/- pairing residual exceeds 1e-9, which would signal a build bug.
ModeSpectrum diagonalize_modes(const QuadraticForm& q);

/// Ground energy -sum_l lambda_l.
double ground_energy(const ModeSpectrum& spec);

/// Energy gap 2 * lambda_0 (smallest positive mode).
double spectral_gap(const ModeSpectrum& spec);

/// Exact magnetization for arbitrary n. The ground branch evaluates the
/// mode-vacuum formula 1 - (2/n) sum_l (U^T P U)_{2l,2l} with P the
/// odd-index projector; the connected branch (adiabatic runs, M(0) = +1) is
/// its negation under the spin-flip symmetry.
double magnetization_exact(int n, double j, Branch branch);

/// Full curve over a J grid; points are independent and are computed in
/// parallel (worker count capped by COMPRESSED_ISING_THREADS).
MagnetizationCurve exact_curve(int n, const std::vector<double>& j_values, Branch branch,
                               double j_max);

}  // namespace cising
