#include "ncg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ncg {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw DimensionError(msg);
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    require(a_.size() == rows_ * cols_, "entry count does not match rows*cols");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::column(const std::vector<Complex>& v) {
    ComplexMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        require(row.size() == c, "ragged row in matrix literal");
        std::size_t j = 0;
        for (const auto& z : row) m(i, j++) = z;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix addition shape mismatch");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix subtraction shape mismatch");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    require(cols_ == o.rows_, "matrix product shape mismatch");
    ComplexMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex aik = (*this)(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

ComplexMatrix ComplexMatrix::operator*(Complex s) const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = std::conj(a_[k]);
    return r;
}

Complex ComplexMatrix::trace() const {
    require(square(), "trace of non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
}

ComplexMatrix ComplexMatrix::block(std::size_t i0, std::size_t j0, std::size_t r,
                                   std::size_t c) const {
    require(i0 + r <= rows_ && j0 + c <= cols_, "block out of range");
    ComplexMatrix b(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
}

void ComplexMatrix::set_block(std::size_t i0, std::size_t j0, const ComplexMatrix& b) {
    require(i0 + b.rows() <= rows_ && j0 + b.cols() <= cols_, "block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

std::vector<Complex> ComplexMatrix::apply(const std::vector<Complex>& v) const {
    require(v.size() == cols_, "matrix-vector shape mismatch");
    std::vector<Complex> r(rows_, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "comparison shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    return m;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs_diff(a, b) <= tol;
}

double hermitian_residual(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionError("hermitian_residual: matrix not square");
    return max_abs_diff(m, m.adjoint());
}

double unitarity_residual(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionError("unitarity_residual: matrix not square");
    return max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.empty() || b.empty()) throw DimensionError("kron of empty matrix");
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

ComplexMatrix direct_sum(const std::vector<ComplexMatrix>& ms) {
    if (ms.empty()) throw DimensionError("direct_sum of empty list");
    std::size_t rows = 0, cols = 0;
    for (const auto& m : ms) {
        rows += m.rows();
        cols += m.cols();
    }
    ComplexMatrix r(rows, cols);
    std::size_t i0 = 0, j0 = 0;
    for (const auto& m : ms) {
        r.set_block(i0, j0, m);
        i0 += m.rows();
        j0 += m.cols();
    }
    return r;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b + b * a;
}

namespace {

double offdiag_frobenius(const ComplexMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

} // namespace

EigResult hermitian_eig(const ComplexMatrix& m, double herm_tol) {
    if (m.empty()) throw DimensionError("hermitian_eig: empty matrix");
    if (!m.square()) throw DimensionError("hermitian_eig: matrix not square");
    const double herm_res = hermitian_residual(m);
    if (herm_res > herm_tol * (1.0 + m.max_abs()))
        throw ContractViolation("hermitian_eig: input not Hermitian, residual " +
                                std::to_string(herm_res));

    const std::size_t n = m.rows();
    // Work on the symmetrized copy so roundoff asymmetry cannot drift.
    ComplexMatrix a = (m + m.adjoint()) * Complex(0.5, 0.0);
    ComplexMatrix u = ComplexMatrix::identity(n);

    const double norm_f = std::max(a.frobenius_norm(), 1e-300);
    const double target = 1e-13 * norm_f;
    const int max_sweeps = 128;

    for (int sweep = 0; sweep < max_sweeps && offdiag_frobenius(a) > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double g = std::abs(apq);
                if (g <= 1e-300) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Phase factor turning a(p,q) real, then a real Jacobi rotation.
                const Complex phase = apq / g;
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // R restricted to (p,q): [[c, s], [-s*conj(phase), c*conj(phase)]]
                const Complex rpp(c, 0.0), rpq(s, 0.0);
                const Complex rqp = -s * std::conj(phase);
                const Complex rqq = c * std::conj(phase);
                // A <- R^H A R (columns then rows), U <- U R.
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * rpp + aiq * rqp;
                    a(i, q) = aip * rpq + aiq * rqq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a(p, j), aqj = a(q, j);
                    a(p, j) = std::conj(rpp) * apj + std::conj(rqp) * aqj;
                    a(q, j) = std::conj(rpq) * apj + std::conj(rqq) * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex uip = u(i, p), uiq = u(i, q);
                    u(i, p) = uip * rpp + uiq * rqp;
                    u(i, q) = uip * rpq + uiq * rqq;
                }
                a(p, q) = std::conj(a(q, p)); // keep exactly Hermitian
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

    EigResult res;
    res.values.resize(n);
    res.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        res.values[k] = diag[order[k]];
        // Deterministic orientation: first component of magnitude > 1e-12
        // is made real positive.
        Complex rot(1.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex v = u(i, order[k]);
            if (std::abs(v) > 1e-12) {
                rot = std::conj(v / std::abs(v));
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) res.vectors(i, k) = u(i, order[k]) * rot;
    }
    return res;
}

double operator_norm(const ComplexMatrix& m) {
    if (m.empty()) throw DimensionError("operator_norm: empty matrix");
    const auto gram = m.adjoint() * m;
    const auto eig = hermitian_eig(gram, 1e-6);
    const double top = eig.values.empty() ? 0.0 : eig.values.back();
    return std::sqrt(std::max(top, 0.0));
}

SvdResult svd(const ComplexMatrix& m) {
    if (m.empty()) throw DimensionError("svd: empty matrix");
    // Work on A (or A^H when wide) so columns <= rows.
    const bool wide = m.cols() > m.rows();
    ComplexMatrix a = wide ? m.adjoint() : m;
    const std::size_t n = a.cols();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                Complex apq = 0.0;
                for (std::size_t i = 0; i < a.rows(); ++i) {
                    app += std::norm(a(i, p));
                    aqq += std::norm(a(i, q));
                    apq += std::conj(a(i, p)) * a(i, q);
                }
                const double g = std::abs(apq);
                if (g <= 1e-15 * std::sqrt(app * aqq) || g == 0.0) continue;
                rotated = true;
                const Complex phase = apq / g;
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex rpp(c, 0.0), rpq(s, 0.0);
                const Complex rqp = -s * std::conj(phase);
                const Complex rqq = c * std::conj(phase);
                for (std::size_t i = 0; i < a.rows(); ++i) {
                    const Complex aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * rpp + aiq * rqp;
                    a(i, q) = aip * rpq + aiq * rqq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * rpp + viq * rqp;
                    v(i, q) = vip * rpq + viq * rqq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
        norms[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    SvdResult res;
    res.sigma.resize(n);
    ComplexMatrix uu(a.rows(), n), vv(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        res.sigma[k] = norms[j];
        for (std::size_t i = 0; i < n; ++i) vv(i, k) = v(i, j);
        if (norms[j] > 0.0)
            for (std::size_t i = 0; i < a.rows(); ++i) uu(i, k) = a(i, j) / norms[j];
    }
    if (wide) {
        // m = (a)^H = V Sigma U^H: swap roles.
        res.u = vv; // but u must be m.rows x min: vv is n x n with n = m.rows
        res.v = ComplexMatrix(m.cols(), m.cols());
        // Extend uu (m.cols x n) to a full unitary on m.cols dims: complete
        // with the null space of its columns.
        // Simpler: recompute via the fact that full V is only ever used for
        // null spaces; fill known columns and complete by Gram-Schmidt
        // against the standard basis.
        const std::size_t nc = m.cols();
        ComplexMatrix full(nc, nc);
        std::size_t placed = 0;
        for (std::size_t k = 0; k < uu.cols() && placed < nc; ++k) {
            if (res.sigma[k] > 0.0) {
                for (std::size_t i = 0; i < nc; ++i) full(i, placed) = uu(i, k);
                ++placed;
            }
        }
        const std::size_t rank_cols = placed;
        for (std::size_t e = 0; e < nc && placed < nc; ++e) {
            std::vector<Complex> cand(nc, Complex(0.0, 0.0));
            cand[e] = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t k = 0; k < placed; ++k) {
                    Complex ip = 0.0;
                    for (std::size_t i = 0; i < nc; ++i) ip += std::conj(full(i, k)) * cand[i];
                    for (std::size_t i = 0; i < nc; ++i) cand[i] -= ip * full(i, k);
                }
            double nn = 0.0;
            for (const auto& z : cand) nn += std::norm(z);
            if (std::sqrt(nn) > 1e-8) {
                for (std::size_t i = 0; i < nc; ++i) full(i, placed) = cand[i] / std::sqrt(nn);
                ++placed;
            }
        }
        (void)rank_cols;
        res.v = full;
        // u of the wide matrix: columns of vv for the nonzero part.
        res.u = vv;
    } else {
        res.u = uu;
        res.v = vv;
    }
    return res;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    return svd(m).sigma;
}

std::size_t matrix_rank(const ComplexMatrix& m, double sv_tol) {
    const auto sv = singular_values(m);
    std::size_t r = 0;
    for (double s : sv)
        if (s > sv_tol) ++r;
    return r;
}

ComplexMatrix null_space(const ComplexMatrix& m, double sv_tol) {
    const auto res = svd(m);
    std::vector<std::vector<Complex>> cols;
    for (std::size_t k = 0; k < res.v.cols(); ++k) {
        const double s = k < res.sigma.size() ? res.sigma[k] : 0.0;
        if (s <= sv_tol) {
            std::vector<Complex> col(m.cols());
            for (std::size_t i = 0; i < m.cols(); ++i) col[i] = res.v(i, k);
            cols.push_back(std::move(col));
        }
    }
    if (cols.empty()) return ComplexMatrix(m.cols(), 0);
    return from_columns(cols);
}

ComplexMatrix least_squares(const ComplexMatrix& a, const ComplexMatrix& b,
                            double rel_cutoff) {
    if (a.rows() != b.rows()) throw DimensionError("least_squares shape mismatch");
    const auto res = svd(a);
    const double top = res.sigma.empty() ? 0.0 : res.sigma.front();
    const double cut = top * rel_cutoff;
    // x = V Sigma^+ U^H b
    ComplexMatrix uhb = res.u.adjoint() * b;
    for (std::size_t k = 0; k < res.sigma.size(); ++k) {
        const Complex f = res.sigma[k] > cut && res.sigma[k] > 0.0
                              ? Complex(1.0 / res.sigma[k], 0.0)
                              : Complex(0.0, 0.0);
        for (std::size_t j = 0; j < uhb.cols(); ++j) uhb(k, j) *= f;
    }
    ComplexMatrix vk(a.cols(), res.sigma.size());
    for (std::size_t k = 0; k < res.sigma.size(); ++k)
        for (std::size_t i = 0; i < a.cols(); ++i) vk(i, k) = res.v(i, k);
    return vk * uhb;
}

ComplexMatrix column_space(const ComplexMatrix& m, double sv_tol) {
    if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
    const auto res = svd(m);
    std::vector<std::vector<Complex>> cols;
    for (std::size_t k = 0; k < res.sigma.size(); ++k) {
        if (res.sigma[k] <= sv_tol) break;
        std::vector<Complex> col(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) col[i] = res.u(i, k);
        cols.push_back(std::move(col));
    }
    if (cols.empty()) return ComplexMatrix(m.rows(), 0);
    return from_columns(cols);
}

ComplexMatrix from_columns(const std::vector<std::vector<Complex>>& cols) {
    if (cols.empty()) return ComplexMatrix();
    ComplexMatrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != m.rows()) throw DimensionError("ragged column list");
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = cols[j][i];
    }
    return m;
}

AntiunitaryOperator::AntiunitaryOperator(ComplexMatrix unitary_part, double tol)
    : u_(std::move(unitary_part)) {
    if (!u_.square()) throw DimensionError("antiunitary: unitary part not square");
    const double res = unitarity_residual(u_);
    if (res > tol)
        throw ContractViolation("antiunitary: unitary part fails U^H U = I, residual " +
                                std::to_string(res));
}

std::vector<Complex> AntiunitaryOperator::apply(const std::vector<Complex>& v) const {
    std::vector<Complex> cv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) cv[i] = std::conj(v[i]);
    return u_.apply(cv);
}

ComplexMatrix AntiunitaryOperator::squared() const { return u_ * u_.conj(); }

ComplexMatrix AntiunitaryOperator::sandwich(const ComplexMatrix& m) const {
    return u_ * m.conj() * u_.adjoint();
}

ComplexMatrix AntiunitaryOperator::commute_defect(const ComplexMatrix& m) const {
    return u_ * m.conj() - m * u_;
}

ComplexMatrix AntiunitaryOperator::anticommute_defect(const ComplexMatrix& m) const {
    return u_ * m.conj() + m * u_;
}

} // namespace ncg
