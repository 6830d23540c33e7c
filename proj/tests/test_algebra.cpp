#include "doctest.h"

#include <random>

#include "ncg/algebra.hpp"

using namespace ncg;

namespace {

AlgebraElement random_element(std::mt19937_64& rng, const FiniteCStarAlgebra& a) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> coords(a.dim());
    for (auto& c : coords) c = Complex(g(rng), g(rng));
    return a.from_coords(coords);
}

} // namespace

TEST_CASE("algebra basics and the C*-identity") {
    FiniteCStarAlgebra a({2, 1, 3});
    CHECK(!a.is_commutative());
    CHECK(a.dim() == 4 + 1 + 9);
    CHECK(FiniteCStarAlgebra({1, 1, 1}).is_commutative());

    std::mt19937_64 rng(99);
    for (int t = 0; t < 25; ++t) {
        const auto x = random_element(rng, a);
        const double lhs = (x.adjoint() * x).norm();
        const double rhs = x.norm() * x.norm();
        CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + rhs));
    }
}

TEST_CASE("spectrum of commutative algebras") {
    CHECK(spectrum(FiniteCStarAlgebra({1})).size() == 1);
    const FiniteCStarAlgebra c3({1, 1, 1});
    const auto chars = spectrum(c3);
    REQUIRE(chars.size() == 3);
    // omega_i(e_j) = delta_ij on minimal idempotents
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(chars[i].evaluate(c3.block_idempotent(j)) -
                           Complex(i == j ? 1.0 : 0.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS(spectrum(FiniteCStarAlgebra({1, 2})), DomainError);
}

TEST_CASE("pullback of the spectrum") {
    const FiniteCStarAlgebra c2({1, 1}), c3({1, 1, 1});
    SUBCASE("identity") {
        const auto id = AlgebraHomomorphism::identity(c3);
        const auto pb = pullback_spectrum(id);
        CHECK(pb == std::vector<std::size_t>({0, 1, 2}));
    }
    SUBCASE("(x,y) -> (x,x,y)") {
        const auto phi = AlgebraHomomorphism::from_index_map(c2, c3, {0, 0, 1});
        CHECK(pullback_spectrum(phi) == std::vector<std::size_t>({0, 0, 1}));
    }
    SUBCASE("swap") {
        const auto phi = AlgebraHomomorphism::from_index_map(c2, c2, {1, 0});
        CHECK(pullback_spectrum(phi) == std::vector<std::size_t>({1, 0}));
    }
    SUBCASE("functorial: pullback of composition is reversed composition") {
        const auto phi = AlgebraHomomorphism::from_index_map(c2, c3, {0, 0, 1});
        const auto psi = AlgebraHomomorphism::from_index_map(c3, c2, {2, 1});
        const auto comp = psi.compose_after(phi); // c2 -> c2
        const auto pb = pullback_spectrum(comp);
        const auto pb_phi = pullback_spectrum(phi);
        const auto pb_psi = pullback_spectrum(psi);
        for (std::size_t j = 0; j < pb.size(); ++j) CHECK(pb[j] == pb_phi[pb_psi[j]]);
    }
}

TEST_CASE("Gel'fand transform") {
    const FiniteCStarAlgebra c2({1, 1});
    const auto a = c2.from_coords({Complex(2.0, 0.0), Complex(-1.0, 0.0)});
    const auto vals = gelfand_transform(a);
    CHECK(vals[0] == Complex(2.0, 0.0));
    CHECK(vals[1] == Complex(-1.0, 0.0));
    const auto ones = gelfand_transform(c2.unit());
    CHECK(ones[0] == Complex(1.0, 0.0));
    CHECK(ones[1] == Complex(1.0, 0.0));

    // isometry on random elements
    std::mt19937_64 rng(321);
    const FiniteCStarAlgebra c5({1, 1, 1, 1, 1});
    for (int t = 0; t < 100; ++t) {
        const auto x = random_element(rng, c5);
        double sup = 0.0;
        for (const auto& v : gelfand_transform(x)) sup = std::max(sup, std::abs(v));
        CHECK(std::abs(sup - x.norm()) < 1e-12 * (1.0 + sup));
    }
    CHECK_THROWS_AS(gelfand_transform(FiniteCStarAlgebra({2}).unit()), DomainError);
}

TEST_CASE("evaluation homeomorphism and full round trip, n <= 6") {
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<std::size_t> dims(n, 1);
        const auto rep = evaluation_homeomorphism_check(FiniteCStarAlgebra(dims));
        CHECK(rep.passed());
        CHECK(rep.worst_residual() == 0.0);
    }
}

TEST_CASE("characters are the multiplicative pure states of commutative algebras") {
    const FiniteCStarAlgebra c4({1, 1, 1, 1});
    std::mt19937_64 rng(5);
    const auto chars = spectrum(c4);
    for (const auto& c : chars) {
        const auto st = PureState::from_character(c);
        for (int t = 0; t < 10; ++t) {
            const auto x = random_element(rng, c4);
            const auto y = random_element(rng, c4);
            CHECK(std::abs(st.evaluate(x * y) - st.evaluate(x) * st.evaluate(y)) < 1e-12);
            CHECK(std::abs(st.evaluate(x) - c.evaluate(x)) < 1e-15);
        }
    }
}

TEST_CASE("pure states: positivity, normalization, phase gauge") {
    const FiniteCStarAlgebra a({2, 3});
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<Complex> xi(3);
        for (auto& z : xi) z = Complex(g(rng), g(rng));
        const PureState w(a, 1, xi);
        CHECK(std::abs(w.evaluate(a.unit()) - Complex(1.0, 0.0)) < 1e-12);
        const auto x = random_element(rng, a);
        const auto v = w.evaluate(x.adjoint() * x);
        CHECK(v.real() >= -1e-12);
        CHECK(std::abs(v.imag()) < 1e-12);
        // canonical phase
        for (const auto& z : w.vector()) {
            if (std::abs(z) > 1e-9) {
                CHECK(z.real() > 0.0);
                CHECK(std::abs(z.imag()) < 1e-12);
                break;
            }
        }
    }
}

TEST_CASE("general homomorphisms are verified, bad maps rejected") {
    const FiniteCStarAlgebra m2({2});
    // a -> a + a (block-diagonal doubling) into M2 + M2 is a unital *-hom.
    const FiniteCStarAlgebra m2m2({2, 2});
    ComplexMatrix lin(m2m2.dim(), m2.dim());
    for (std::size_t k = 0; k < 4; ++k) {
        lin(k, k) = 1.0;
        lin(4 + k, k) = 1.0;
    }
    const auto phi = AlgebraHomomorphism::from_linear_map(m2, m2m2, lin);
    CHECK(phi.hom_residual() < 1e-12);
    CHECK(!phi.is_epi());

    // Transpose map is NOT a homomorphism (it is an anti-homomorphism).
    ComplexMatrix bad(m2.dim(), m2.dim());
    bad(0, 0) = 1.0;
    bad(1, 2) = 1.0;
    bad(2, 1) = 1.0;
    bad(3, 3) = 1.0;
    CHECK_THROWS_AS(AlgebraHomomorphism::from_linear_map(m2, m2, bad), ContractViolation);
}
