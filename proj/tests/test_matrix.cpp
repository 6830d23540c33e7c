#include "doctest.h"

#include <random>

#include "ncg/matrix.hpp"

using namespace ncg;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
    auto m = random_matrix(rng, n);
    return (m + m.adjoint()) * Complex(0.5, 0.0);
}

} // namespace

TEST_CASE("operator norm on pinned examples") {
    CHECK(operator_norm(ComplexMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(operator_norm(ComplexMatrix::diagonal({3.0, -4.0})) ==
          doctest::Approx(4.0).epsilon(1e-12));
    // Eigenvalues of M^H M are {4, 0}.
    const auto m = ComplexMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}});
    CHECK(operator_norm(m) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(operator_norm(ComplexMatrix()), DimensionError);
}

TEST_CASE("hermitian_eig on pinned examples") {
    SUBCASE("diagonal") {
        const auto r = hermitian_eig(ComplexMatrix::diagonal({2.0, 1.0}));
        CHECK(r.values[0] == doctest::Approx(1.0));
        CHECK(r.values[1] == doctest::Approx(2.0));
    }
    SUBCASE("off-diagonal, characteristic polynomial l^2 - 1") {
        const auto r = hermitian_eig(ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
        CHECK(r.values[0] == doctest::Approx(-1.0));
        CHECK(r.values[1] == doctest::Approx(1.0));
    }
    SUBCASE("1x1") {
        const auto r = hermitian_eig(ComplexMatrix::diagonal({5.0}));
        CHECK(r.values[0] == doctest::Approx(5.0));
        CHECK(r.vectors(0, 0).real() == doctest::Approx(1.0));
    }
    SUBCASE("non-Hermitian input rejected") {
        CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})),
                        ContractViolation);
    }
}

TEST_CASE("hermitian_eig round trip and orientation on random matrices") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 7;
        const auto m = random_hermitian(rng, n);
        const auto r = hermitian_eig(m);
        CHECK(unitarity_residual(r.vectors) < 1e-11);
        const auto rebuilt =
            r.vectors * ComplexMatrix::diagonal(std::vector<Complex>(r.values.begin(),
                                                                     r.values.end())) *
            r.vectors.adjoint();
        CHECK(max_abs_diff(rebuilt, m) <= 1e-10 * (1.0 + operator_norm(m)));
        for (std::size_t k = 0; k + 1 < n; ++k) CHECK(r.values[k] <= r.values[k + 1] + 1e-12);
        // orientation: first nonzero component real positive
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const Complex v = r.vectors(i, k);
                if (std::abs(v) > 1e-9) {
                    CHECK(v.real() > 0.0);
                    CHECK(std::abs(v.imag()) < 1e-9 * std::abs(v.real()) + 1e-12);
                    break;
                }
            }
        }
    }
}

TEST_CASE("C*-identity and submultiplicativity of the operator norm") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto a = random_matrix(rng, n);
        const auto b = random_matrix(rng, n);
        CHECK(operator_norm(a * b) <= operator_norm(a) * operator_norm(b) + 1e-9);
        const double lhs = operator_norm(a.adjoint() * a);
        const double rhs = operator_norm(a) * operator_norm(a);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + rhs));
    }
}

TEST_CASE("direct_sum and kron index conventions") {
    const auto d = direct_sum({ComplexMatrix::diagonal({Complex(2.0, 1.0)}),
                               ComplexMatrix::diagonal({Complex(-1.0, 0.0)})});
    CHECK(d.rows() == 2);
    CHECK(d(0, 0) == Complex(2.0, 1.0));
    CHECK(d(1, 1) == Complex(-1.0, 0.0));
    CHECK(d(0, 1) == Complex(0.0, 0.0));

    const auto m = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const auto k1 = kron(ComplexMatrix::identity(2), m);
    CHECK(approx_equal(k1.block(0, 0, 2, 2), m, 1e-15));
    CHECK(approx_equal(k1.block(2, 2, 2, 2), m, 1e-15));
    CHECK(k1.block(0, 2, 2, 2).max_abs() == 0.0);

    // kron([[0,1],[0,0]], I2) has I2 in the upper-right block.
    const auto k2 = kron(ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}),
                         ComplexMatrix::identity(2));
    CHECK(approx_equal(k2.block(0, 2, 2, 2), ComplexMatrix::identity(2), 1e-15));
    CHECK(k2.block(0, 0, 2, 2).max_abs() == 0.0);
    CHECK(k2.block(2, 0, 2, 2).max_abs() == 0.0);
    CHECK(k2.block(2, 2, 2, 2).max_abs() == 0.0);
}

TEST_CASE("least squares, rank and null space") {
    std::mt19937_64 rng(4242);
    const auto a = random_matrix(rng, 4);
    const auto x = random_matrix(rng, 4).block(0, 0, 4, 1);
    const auto b = a * x;
    const auto sol = least_squares(a, b);
    CHECK(max_abs_diff(a * sol, b) < 1e-9);

    ComplexMatrix r1(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            r1(i, j) = Complex(double(i + 1) * double(j + 1), 0.0);
    CHECK(matrix_rank(r1, 1e-10) == 1);
    const auto ns = null_space(r1, 1e-10);
    CHECK(ns.cols() == 2);
    CHECK((r1 * ns).max_abs() < 1e-10);
}

TEST_CASE("antiunitary operator basics") {
    // J = conj on C^2: J^2 = +1.
    AntiunitaryOperator j(ComplexMatrix::identity(2));
    CHECK(approx_equal(j.squared(), ComplexMatrix::identity(2), 1e-12));
    // Symplectic J: J^2 = -1.
    AntiunitaryOperator js(ComplexMatrix::from_rows({{0.0, -1.0}, {1.0, 0.0}}));
    CHECK(approx_equal(js.squared(), ComplexMatrix::identity(2) * Complex(-1.0, 0.0), 1e-12));
    // J M J^{-1} for J = conj is entrywise conjugation.
    const auto m = ComplexMatrix::from_rows(
        {{Complex(1, 2), Complex(0, -1)}, {Complex(3, 0), Complex(0, 4)}});
    CHECK(approx_equal(j.sandwich(m), m.conj(), 1e-12));
    CHECK_THROWS_AS(AntiunitaryOperator{m}, ContractViolation);
}
