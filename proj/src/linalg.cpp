#include "cising/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cising {

namespace {
double g_default_tol = 1e-10;
}

double default_tol() { return g_default_tol; }
void set_default_tol(double tol) { g_default_tol = tol; }

namespace {
double resolve(double tol) { return tol < 0 ? g_default_tol : tol; }
}

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<T> entries)
    : rows_(rows), cols_(cols), data_(entries) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("matrix literal size does not match dimensions");
    }
}

template <typename T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
    Matrix<T> m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
}

template class Matrix<double>;
template class Matrix<cplx>;

namespace {

template <typename T>
Matrix<T> mul_impl(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) {
        std::ostringstream os;
        os << "mat_mul dimension mismatch: " << a.rows() << "x" << a.cols() << " * " << b.rows()
           << "x" << b.cols();
        throw std::invalid_argument(os.str());
    }
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T* ci = c.row(i);
        const T* ai = a.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = ai[k];
            if (aik == T{}) continue;
            const T* bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

template <typename T>
Matrix<T> transpose_impl(const Matrix<T>& a) {
    Matrix<T> t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

template <typename T>
Matrix<T> kron_impl(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const T aij = a(i, j);
            if (aij == T{}) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return k;
}

template <typename T>
Matrix<T> kron_list_impl(const std::vector<Matrix<T>>& factors) {
    if (factors.empty()) throw std::invalid_argument("kron: empty factor list");
    Matrix<T> acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = kron_impl(acc, factors[i]);
    return acc;
}

}  // namespace

RealMatrix mat_mul(const RealMatrix& a, const RealMatrix& b) { return mul_impl(a, b); }
ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) { return mul_impl(a, b); }

RealMatrix transpose(const RealMatrix& a) { return transpose_impl(a); }
ComplexMatrix transpose(const ComplexMatrix& a) { return transpose_impl(a); }

ComplexMatrix conj_transpose(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) { return kron_impl(a, b); }
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) { return kron_impl(a, b); }
RealMatrix kron(const std::vector<RealMatrix>& factors) { return kron_list_impl(factors); }
ComplexMatrix kron(const std::vector<ComplexMatrix>& factors) { return kron_list_impl(factors); }

ComplexMatrix to_complex(const RealMatrix& a) {
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    return c;
}

RealMatrix real_part(const ComplexMatrix& a, double tol) {
    const double t = resolve(tol);
    RealMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (std::abs(a(i, j).imag()) > t) {
                throw std::runtime_error("real_part: imaginary component above tolerance");
            }
            r(i, j) = a(i, j).real();
        }
    return r;
}

double max_abs(const RealMatrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const cplx& v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

namespace {
template <typename T>
double max_abs_diff_impl(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}
}  // namespace

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) { return max_abs_diff_impl(a, b); }
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return max_abs_diff_impl(a, b);
}

double determinant(const RealMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: square matrix required");
    const std::size_t n = a.rows();
    RealMatrix lu = a;
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (lu(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(pivot, j), lu(col, j));
            det = -det;
        }
        det *= lu(col, col);
        const double inv = 1.0 / lu(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = lu(r, col) * inv;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
        }
    }
    return det;
}

double unitarity_residual(const ComplexMatrix& u) {
    return max_abs_diff(mat_mul(conj_transpose(u), u), ComplexMatrix::identity(u.cols()));
}

double orthogonality_residual(const RealMatrix& r) {
    return max_abs_diff(mat_mul(transpose(r), r), RealMatrix::identity(r.cols()));
}

bool is_unitary(const ComplexMatrix& u, double tol) {
    return u.rows() == u.cols() && unitarity_residual(u) <= resolve(tol);
}

bool is_special_orthogonal(const RealMatrix& r, double tol) {
    const double t = resolve(tol);
    return r.rows() == r.cols() && orthogonality_residual(r) <= t &&
           std::abs(determinant(r) - 1.0) <= t;
}

EigSym eig_sym_real(const RealMatrix& a_in, double tol) {
    if (a_in.rows() != a_in.cols()) {
        throw std::invalid_argument("eig_sym_real: square matrix required");
    }
    const std::size_t n = a_in.rows();
    {
        double asym = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                asym = std::max(asym, std::abs(a_in(i, j) - a_in(j, i)));
        if (asym > resolve(tol)) {
            std::ostringstream os;
            os << "eig_sym_real: input asymmetry " << asym << " exceeds tolerance";
            throw std::invalid_argument(os.str());
        }
    }

    // Cyclic Jacobi with threshold skipping; rotations accumulate into v so
    // the eigenbasis is orthonormal to machine precision by construction.
    RealMatrix a = a_in;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = s;
        }
    RealMatrix v = RealMatrix::identity(n);
    const double scale = std::max(max_abs(a), 1e-300);

    const int max_sweeps = 64;
    double off = 0.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
        // Quadratic convergence drives the off-diagonal sum to exact zero
        // within a few sweeps of reaching rounding level.
        if (off == 0.0) {
            EigSym out;
            out.eigenvalues.resize(n);
            for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i);
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return out.eigenvalues[x] > out.eigenvalues[y];
            });
            EigSym sorted;
            sorted.eigenvalues.resize(n);
            sorted.vectors = RealMatrix(n, n);
            for (std::size_t c = 0; c < n; ++c) {
                sorted.eigenvalues[c] = out.eigenvalues[order[c]];
                for (std::size_t r = 0; r < n; ++r) sorted.vectors(r, c) = v(r, order[c]);
            }
            return sorted;
        }

        const double thresh = (sweep < 4) ? 0.2 * off * off / (double(n) * double(n)) : 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double g = 100.0 * std::abs(apq);
                if (sweep > 4 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + g == std::abs(a(q, q))) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                if (apq * apq <= thresh) continue;
                const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
                double t;
                if (std::abs(theta) > 1e154) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double h = t * apq;
                a(p, p) -= h;
                a(q, q) += h;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p), arq = a(r, q);
                    a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                    a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                }
                double* vcol = v.data().data();
                for (std::size_t r = 0; r < n; ++r) {
                    double& vrp = vcol[r * n + p];
                    double& vrq = vcol[r * n + q];
                    const double xp = vrp, xq = vrq;
                    vrp = xp - s * (xq + tau * xp);
                    vrq = xq + s * (xp - tau * xq);
                }
            }
        }
    }
    std::ostringstream os;
    os << "eig_sym_real: no convergence after " << max_sweeps
       << " sweeps, off-diagonal residual " << off;
    throw std::runtime_error(os.str());
}

}  // namespace cising
