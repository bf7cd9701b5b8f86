#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace cising {

using cplx = std::complex<double>;

/// Global absolute tolerance used by checks that do not take an explicit one.
double default_tol();
void set_default_tol(double tol);

/// Dense row-major matrix with value semantics. Operations return new
/// matrices; nothing mutates its arguments (the compressed-evolution engine
/// has its own explicit in-place path).
template <typename T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<T> entries);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    T* row(std::size_t r) { return data_.data() + r * cols_; }
    const T* row(std::size_t r) const { return data_.data() + r * cols_; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

RealMatrix mat_mul(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);

RealMatrix transpose(const RealMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conj_transpose(const ComplexMatrix& a);

RealMatrix kron(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix kron(const std::vector<RealMatrix>& factors);
ComplexMatrix kron(const std::vector<ComplexMatrix>& factors);

ComplexMatrix to_complex(const RealMatrix& a);
/// Drops a negligible imaginary part; rejects if any |Im| exceeds tol.
RealMatrix real_part(const ComplexMatrix& a, double tol = -1.0);

double max_abs(const RealMatrix& a);
double max_abs(const ComplexMatrix& a);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

double determinant(const RealMatrix& a);

double unitarity_residual(const ComplexMatrix& u);
double orthogonality_residual(const RealMatrix& r);
bool is_unitary(const ComplexMatrix& u, double tol = -1.0);
/// Orthogonality and det(R) = 1, both within tol.
bool is_special_orthogonal(const RealMatrix& r, double tol = -1.0);

struct EigSym {
    std::vector<double> eigenvalues;  // sorted descending
    RealMatrix vectors;               // orthogonal; column i pairs with eigenvalues[i]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Rejects
/// asymmetric input (max|A - A^T| > tol); throws on non-convergence with the
/// remaining off-diagonal residual in the message.
EigSym eig_sym_real(const RealMatrix& a, double tol = -1.0);

}  // namespace cising
