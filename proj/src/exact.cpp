#include "cising/exact.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cising/runner.hpp"

namespace cising {

QuadraticForm build_quadratic_form(int n, double j) {
    if (n < 2) throw std::invalid_argument("build_quadratic_form: n must be >= 2");
    RealMatrix m(2 * static_cast<std::size_t>(n), 2 * static_cast<std::size_t>(n));
    // diagonal blocks -Z, superdiagonal blocks -(J/2)[[1,1],[-1,-1]]
    for (int l = 0; l < n; ++l) {
        m(2 * l, 2 * l) = -1.0;
        m(2 * l + 1, 2 * l + 1) = 1.0;
    }
    const double b = -j / 2.0;
    for (int l = 0; l + 1 < n; ++l) {
        m(2 * l, 2 * l + 2) = b;
        m(2 * l, 2 * l + 3) = b;
        m(2 * l + 1, 2 * l + 2) = -b;
        m(2 * l + 1, 2 * l + 3) = -b;
        m(2 * l + 2, 2 * l) = b;
        m(2 * l + 3, 2 * l) = b;
        m(2 * l + 2, 2 * l + 1) = -b;
        m(2 * l + 3, 2 * l + 1) = -b;
    }
    return QuadraticForm{n, j, std::move(m)};
}

namespace {

// (I (x) X) v: swaps entries within each aligned pair.
void pair_swap(const std::vector<double>& v, std::vector<double>& out) {
    const std::size_t d = v.size();
    for (std::size_t i = 0; i < d; i += 2) {
        out[i] = v[i + 1];
        out[i + 1] = v[i];
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

std::vector<double> ModeSpectrum::interleaved() const {
    std::vector<double> d(2 * lambdas.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        d[2 * l] = lambdas[l];
        d[2 * l + 1] = -lambdas[l];
    }
    return d;
}

ModeSpectrum diagonalize_modes(const QuadraticForm& q) {
    const int n = q.n;
    const std::size_t d = 2 * static_cast<std::size_t>(n);
    const EigSym eig = eig_sym_real(q.matrix);
    const double scale = std::max(1.0, std::abs(eig.eigenvalues.front()));

    // Spectrum must split into (+l, -l) pairs.
    for (int i = 0; i < n; ++i) {
        const double plus = eig.eigenvalues[i];
        const double minus = eig.eigenvalues[d - 1 - i];
        if (std::abs(plus + minus) > 1e-9 * scale) {
            std::ostringstream os;
            os << "diagonalize_modes: unpaired spectrum, residual " << std::abs(plus + minus);
            throw std::runtime_error(os.str());
        }
    }

    // Column construction: for each positive mode take its eigenvector v and
    // pair it with (I (x) X) v, which spans the -lambda partner. Vectors in
    // the numerically-zero class are recombined from the (I (x) X)
    // eigenbasis of that subspace first, then everything passes through a
    // pair-preserving Gram-Schmidt so the basis stays orthogonal even when
    // lambda underflows (large n, J > 1).
    const double zero_tol = 1e-11 * scale;
    std::vector<std::vector<double>> candidates;
    candidates.reserve(n);
    std::vector<double> lambdas;
    lambdas.reserve(n);

    std::vector<std::size_t> zero_idx;
    for (std::size_t i = 0; i < d; ++i) {
        if (std::abs(eig.eigenvalues[i]) <= zero_tol) zero_idx.push_back(i);
    }

    for (int i = 0; i < n; ++i) {
        if (std::abs(eig.eigenvalues[i]) > zero_tol) {
            std::vector<double> v(d);
            for (std::size_t r = 0; r < d; ++r) v[r] = eig.vectors(r, i);
            candidates.push_back(std::move(v));
            lambdas.push_back(eig.eigenvalues[i]);
        }
    }

    if (!zero_idx.empty()) {
        const std::size_t q2 = zero_idx.size();
        if (q2 % 2 != 0) throw std::runtime_error("diagonalize_modes: odd zero-mode count");
        // (I (x) X) restricted to the zero subspace: symmetric involution with
        // equal +/- multiplicities; recombining its eigenvectors yields
        // candidates orthogonal to their own pair images.
        RealMatrix basis(d, q2);
        for (std::size_t c = 0; c < q2; ++c)
            for (std::size_t r = 0; r < d; ++r) basis(r, c) = eig.vectors(r, zero_idx[c]);
        RealMatrix swapped(d, q2);
        for (std::size_t c = 0; c < q2; ++c)
            for (std::size_t r = 0; r < d; r += 2) {
                swapped(r, c) = basis(r + 1, c);
                swapped(r + 1, c) = basis(r, c);
            }
        const RealMatrix restricted = mat_mul(transpose(basis), swapped);
        const EigSym sub = eig_sym_real(restricted, 1e-8);
        const std::size_t half = q2 / 2;
        for (std::size_t jj = 0; jj < half; ++jj) {
            if (sub.eigenvalues[jj] < 0.5 || sub.eigenvalues[q2 - 1 - jj] > -0.5) {
                throw std::runtime_error("diagonalize_modes: zero-mode involution not +/-1");
            }
            std::vector<double> v(d, 0.0);
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            for (std::size_t r = 0; r < d; ++r) {
                double plus = 0.0, minus = 0.0;
                for (std::size_t c = 0; c < q2; ++c) {
                    plus += basis(r, c) * sub.vectors(c, jj);
                    minus += basis(r, c) * sub.vectors(c, q2 - 1 - jj);
                }
                v[r] = (plus + minus) * inv_sqrt2;
            }
            candidates.push_back(std::move(v));
            lambdas.push_back(0.0);
        }
    }

    if (candidates.size() != static_cast<std::size_t>(n)) {
        throw std::runtime_error("diagonalize_modes: positive-branch selection failed");
    }

    ModeSpectrum spec;
    spec.n = n;
    spec.coupling = q.coupling;
    spec.lambdas = std::move(lambdas);
    spec.basis = RealMatrix(d, d);

    std::vector<std::vector<double>> placed;
    placed.reserve(d);
    std::vector<double> image(d);
    for (int l = 0; l < n; ++l) {
        std::vector<double> v = std::move(candidates[l]);
        // Two-pass Gram-Schmidt against every placed column (their pair
        // images are among them, so the image of v comes out orthogonal for
        // free).
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& p : placed) {
                const double c = dot(p, v);
                if (c != 0.0) {
                    for (std::size_t r = 0; r < d; ++r) v[r] -= c * p[r];
                }
            }
        }
        // Within-pair symmetrization: remove any overlap with the own image.
        pair_swap(v, image);
        const double t = dot(v, image) / dot(v, v);
        if (t != 0.0) {
            const double gamma = t / (1.0 + std::sqrt(std::max(0.0, 1.0 - t * t)));
            for (std::size_t r = 0; r < d; ++r) v[r] -= gamma * image[r];
            pair_swap(v, image);
        }
        const double nrm = std::sqrt(dot(v, v));
        if (nrm < 1e-8) throw std::runtime_error("diagonalize_modes: degenerate candidate column");
        for (std::size_t r = 0; r < d; ++r) v[r] /= nrm;
        pair_swap(v, image);
        for (std::size_t r = 0; r < d; ++r) {
            spec.basis(r, 2 * l) = v[r];
            spec.basis(r, 2 * l + 1) = image[r];
        }
        placed.push_back(v);
        placed.push_back(image);
    }

    const double orth = orthogonality_residual(spec.basis);
    if (orth > 1e-12) {
        std::ostringstream os;
        os << "diagonalize_modes: basis orthogonality residual " << orth;
        throw std::runtime_error(os.str());
    }
    return spec;
}

double ground_energy(const ModeSpectrum& spec) {
    double e = 0.0;
    for (double l : spec.lambdas) e -= l;
    return e;
}

double spectral_gap(const ModeSpectrum& spec) { return 2.0 * spec.lambdas.back(); }

double magnetization_exact(int n, double j, Branch branch) {
    if (j < 0) throw std::invalid_argument("magnetization_exact: J must be >= 0");
    const ModeSpectrum spec = diagonalize_modes(build_quadratic_form(n, j));
    // Vacuum occupation sum_l (U^T P U)_{2l,2l} with P the projector onto
    // odd 1-based indices (the occupation_projector); columns 2l (0-based
    // odd) hold the -lambda partners.
    const std::size_t d = 2 * static_cast<std::size_t>(n);
    double occ = 0.0;
    for (std::size_t l = 0; l < static_cast<std::size_t>(n); ++l) {
        for (std::size_t r = 0; r < d; r += 2) {
            const double u = spec.basis(r, 2 * l + 1);
            occ += u * u;
        }
    }
    const double ground = 1.0 - 2.0 * occ / n;
    return branch == Branch::ground ? ground : -ground;
}

MagnetizationCurve exact_curve(int n, const std::vector<double>& j_values, Branch branch,
                               double j_max) {
    MagnetizationCurve curve;
    curve.provenance = Provenance::exact;
    curve.meta.n = n;
    curve.meta.j_max = j_max;
    curve.coupling = j_values;
    curve.magnetization.assign(j_values.size(), 0.0);

    const int workers = std::min<int>(worker_count(), static_cast<int>(j_values.size()));
    if (workers <= 1 || j_values.size() < 2) {
        for (std::size_t i = 0; i < j_values.size(); ++i) {
            curve.magnetization[i] = magnetization_exact(n, j_values[i], branch);
        }
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                try {
                    for (std::size_t i = w; i < j_values.size(); i += workers) {
                        curve.magnetization[i] = magnetization_exact(n, j_values[i], branch);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }
    curve.validate();
    return curve;
}

}  // namespace cising
