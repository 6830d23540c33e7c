#pragma once

// Dense complex linear algebra kernel. Everything is deterministic: the
// eigensolver is a cyclic Jacobi iteration with a fixed pivot order, singular
// values come from eigenvalues of M^H M, and eigenvector phases are fixed by
// making the first nonzero component real positive. No randomness anywhere.

#include <complex>
#include <cstddef>
#include <vector>

#include "ncg/errors.hpp"

namespace ncg {

using Complex = std::complex<double>;

// Library-wide default absolute comparison tolerance; override per call.
inline constexpr double kDefaultTol = 1e-9;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);
    static ComplexMatrix diagonal(const std::vector<Complex>& d);
    static ComplexMatrix column(const std::vector<Complex>& v);
    // Row-major initializer for tests and fixtures.
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<Complex>& entries() const { return a_; }

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;
    ComplexMatrix operator*(Complex s) const;
    ComplexMatrix operator-() const { return *this * Complex(-1.0, 0.0); }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    // Column vector of all entries, row-major.
    std::vector<Complex> vec() const { return a_; }

    ComplexMatrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;
    void set_block(std::size_t i0, std::size_t j0, const ComplexMatrix& b);

    std::vector<Complex> apply(const std::vector<Complex>& v) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& m) { return m * s; }

// Largest absolute entry of (a - b); infinity if shapes differ is a
// DimensionError instead.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTol);

// Residual of the Hermitian / unitary property (0 means exact).
double hermitian_residual(const ComplexMatrix& m);
double unitarity_residual(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& ms);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigResult {
    std::vector<double> values; // ascending
    ComplexMatrix vectors;      // unitary, columns are eigenvectors
};

// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Input must be
// Hermitian within `herm_tol`, enforced as a contract. Converged when the
// off-diagonal Frobenius mass drops below 1e-13 * ||M||_F.
EigResult hermitian_eig(const ComplexMatrix& m, double herm_tol = 1e-8);

// Largest singular value, computed as sqrt(max eig(M^H M)) clamped at zero.
double operator_norm(const ComplexMatrix& m);

struct SvdResult {
    ComplexMatrix u;            // m x min(m,n); zero columns where sigma = 0
    std::vector<double> sigma;  // min(m,n) values, descending
    ComplexMatrix v;            // n x n unitary (right singular vectors)
};

// One-sided Jacobi SVD. Small singular values keep high relative accuracy,
// which the rank / kernel thresholds below rely on.
SvdResult svd(const ComplexMatrix& m);

// Singular values of m, descending.
std::vector<double> singular_values(const ComplexMatrix& m);

std::size_t matrix_rank(const ComplexMatrix& m, double sv_tol);

// Orthonormal basis (columns) of the null space: right singular vectors with
// singular value <= sv_tol.
ComplexMatrix null_space(const ComplexMatrix& m, double sv_tol);

// Minimum-norm least squares solution of A x = b via the pseudo-inverse;
// singular values below rel_cutoff * sigma_max are treated as zero.
ComplexMatrix least_squares(const ComplexMatrix& a, const ComplexMatrix& b,
                            double rel_cutoff = 1e-12);

// Orthonormal basis of span{columns of m}, dropping directions whose singular
// value is <= sv_tol.
ComplexMatrix column_space(const ComplexMatrix& m, double sv_tol);

// Stack column vectors into a matrix.
ComplexMatrix from_columns(const std::vector<std::vector<Complex>>& cols);

// Antiunitary operator J = U . conj(.) with U unitary. Applying twice gives
// the plain unitary U * conj(U), whose sign against the identity feeds the
// KO-dimension checks.
class AntiunitaryOperator {
public:
    explicit AntiunitaryOperator(ComplexMatrix unitary_part, double tol = 1e-8);

    const ComplexMatrix& unitary_part() const { return u_; }
    std::size_t dim() const { return u_.rows(); }

    std::vector<Complex> apply(const std::vector<Complex>& v) const;

    // J^2 as a linear operator: U * conj(U).
    ComplexMatrix squared() const;

    // The linear operator J M J^{-1} = U conj(M) U^H.
    ComplexMatrix sandwich(const ComplexMatrix& m) const;

    // J M - M J as the antilinear operator's linear coefficient:
    // (J M)(v) = U conj(M) conj(v), (M J)(v) = M U conj(v); the difference
    // is (U conj(M) - M U) . conj(.), so the residual matrix is returned.
    ComplexMatrix commute_defect(const ComplexMatrix& m) const;
    ComplexMatrix anticommute_defect(const ComplexMatrix& m) const;

private:
    ComplexMatrix u_;
};

} // namespace ncg
