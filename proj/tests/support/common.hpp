#pragma once

// Shared instance builders for the unit and acceptance suites.

#include <random>

#include "ncg/triple.hpp"

namespace ncg::testing {

inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = Complex(g(rng), g(rng));
    return hermitian_eig((h + h.adjoint()) * Complex(0.5, 0.0)).vectors;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = Complex(g(rng), g(rng));
    return (h + h.adjoint()) * Complex(0.5, 0.0);
}

// A = M2 acting with multiplicity two, D(x) = Mx + xM for M = diag(1,-1),
// J = (x -> x^*). A fully valid real spectral triple of KO-dimension 7.
inline SpectralTriple matrix_algebra_real_triple() {
    const FiniteCStarAlgebra m2({2});
    Representation rep(m2, {2}, ComplexMatrix::identity(4));
    const auto sz = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    const auto i2 = ComplexMatrix::identity(2);
    const auto d = kron(sz, i2) + kron(i2, sz);
    ComplexMatrix k(4, 4);
    k(0, 0) = 1.0;
    k(1, 2) = 1.0;
    k(2, 1) = 1.0;
    k(3, 3) = 1.0;
    return SpectralTriple(rep, d, std::nullopt, AntiunitaryOperator(k), 7);
}

// Two-point triple extended with J = entrywise conjugation. The sign
// relations for KO-dimension 0 hold; the first-order condition does not
// (no faithful 2-dimensional two-point triple satisfies it), which is fine
// for distance and fluctuation work.
inline SpectralTriple two_point_real_triple(Complex lambda) {
    const auto base = two_point_triple(lambda);
    return SpectralTriple(base.rep(), base.dirac(), base.grading(),
                          AntiunitaryOperator(ComplexMatrix::identity(2)), 0);
}

inline SpectralTriple random_commutative_triple(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> dims(n, 1);
    const FiniteCStarAlgebra a(dims);
    return SpectralTriple(Representation::standard(a), random_hermitian(rng, n));
}

} // namespace ncg::testing
