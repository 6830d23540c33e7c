#include "doctest.h"

#include <random>

#include "ncg/bimodule.hpp"

using namespace ncg;

namespace {

std::vector<std::size_t> random_permutation(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        std::uniform_int_distribution<std::size_t> d(0, i - 1);
        std::swap(p[i - 1], p[d(rng)]);
    }
    return p;
}

Complex random_phase(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(0.0, 6.283185307179586);
    const double t = d(rng);
    return Complex(std::cos(t), std::sin(t));
}

// Bimodule with one full line everywhere: M_{ij} = C for all i, j.
HilbertBimodule all_lines(std::size_t m, std::size_t n) {
    std::vector<BimoduleComponent> comps;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            comps.push_back({i, j, ComplexMatrix::identity(1)});
    return HilbertBimodule(m, n, std::move(comps));
}

} // namespace

TEST_CASE("fullness") {
    CHECK(is_full(all_lines(2, 3), ModuleSide::Left));
    CHECK(is_full(all_lines(2, 3), ModuleSide::Right));

    // all-zero row: not left-full
    std::vector<BimoduleComponent> comps;
    comps.push_back({0, 0, ComplexMatrix::identity(1)});
    const HilbertBimodule gap(2, 1, comps);
    CHECK(!is_full(gap, ModuleSide::Left));
    CHECK(is_full(gap, ModuleSide::Right));

    // permutation-supported lines: full on both sides
    const auto line = HilbertBimodule::line_bimodule({2, 0, 1}, {1.0, 1.0, 1.0});
    CHECK(is_full(line, ModuleSide::Left));
    CHECK(is_full(line, ModuleSide::Right));
}

TEST_CASE("imprimitivity") {
    // C as a C-C bimodule
    CHECK(is_imprimitivity(HilbertBimodule::identity(1)));
    // permutation line bimodule over C^3
    CHECK(is_imprimitivity(HilbertBimodule::line_bimodule(
        {1, 2, 0}, {Complex(1, 0), Complex(0, 1), Complex(-1, 0)})));
    // M_11 = C^2 over C-C: compatibility fails on an orthonormal pair
    std::vector<BimoduleComponent> comps;
    comps.push_back({0, 0, ComplexMatrix::identity(2)});
    CHECK(!is_imprimitivity(HilbertBimodule(1, 1, comps)));
    // full both sides but two lines in one row: not imprimitivity
    CHECK(!is_imprimitivity(all_lines(2, 2)));
}

TEST_CASE("spectral decomposition recovers the permutation and the bundle") {
    SUBCASE("identity bimodule") {
        const auto dec = spectral_decomposition(HilbertBimodule::identity(4));
        CHECK(dec.sigma == std::vector<std::size_t>({0, 1, 2, 3}));
        CHECK(dec.residual < 1e-12);
    }
    SUBCASE("cyclic shift with phases (1, i, -1)") {
        const std::vector<std::size_t> sigma{1, 2, 0};
        const auto m = HilbertBimodule::line_bimodule(
            sigma, {Complex(1, 0), Complex(0, 1), Complex(-1, 0)});
        const auto dec = spectral_decomposition(m);
        CHECK(dec.sigma == sigma);
        CHECK(dec.residual < 1e-12);
        // canonical fiber vectors have real-positive leading component
        for (const auto& v : dec.fiber_vectors) {
            CHECK(v[0].real() > 0.0);
            CHECK(std::abs(v[0].imag()) < 1e-12);
        }
    }
    SUBCASE("random permutations with random phases, n <= 6") {
        std::mt19937_64 rng(2024);
        for (int t = 0; t < 25; ++t) {
            const std::size_t n = 1 + t % 6;
            const auto sigma = random_permutation(rng, n);
            std::vector<Complex> phases(n);
            for (auto& p : phases) p = random_phase(rng);
            const auto dec =
                spectral_decomposition(HilbertBimodule::line_bimodule(sigma, phases));
            CHECK(dec.sigma == sigma);
            CHECK(dec.residual < 1e-12);
        }
    }
    SUBCASE("non-imprimitivity rejected") {
        CHECK_THROWS_AS(spectral_decomposition(all_lines(2, 2)), ContractViolation);
    }
}

TEST_CASE("module_to_bundle fiber dimensions") {
    // free module C^n over C^n (as a left module): n fibers of dimension 1
    std::vector<BimoduleComponent> free_comps;
    for (std::size_t i = 0; i < 3; ++i)
        free_comps.push_back({i, 0, ComplexMatrix::identity(1)});
    CHECK(module_to_bundle(HilbertBimodule(3, 1, free_comps)) ==
          std::vector<std::size_t>({1, 1, 1}));

    // M = C^2 + 0 + C over C^3
    std::vector<BimoduleComponent> comps;
    comps.push_back({0, 0, ComplexMatrix::identity(2)});
    comps.push_back({2, 0, ComplexMatrix::identity(1)});
    const HilbertBimodule m(3, 1, comps);
    const auto fibers = module_to_bundle(m);
    CHECK(fibers == std::vector<std::size_t>({2, 0, 1}));
    CHECK(fibers[0] + fibers[1] + fibers[2] == m.total_dim());
}

TEST_CASE("tensor product") {
    SUBCASE("unit law: X tensor identity has identical component data") {
        const auto x = HilbertBimodule::line_bimodule({1, 0}, {Complex(0, 1), Complex(1, 0)});
        const auto t = tensor_product(x, HilbertBimodule::identity(2));
        CHECK(t.left_blocks() == x.left_blocks());
        CHECK(t.right_blocks() == x.right_blocks());
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                CHECK(t.component_dim(i, j) == x.component_dim(i, j));
        // grams agree, so the coordinate identity is a unitary isomorphism
        for (const auto& c : t.components()) {
            const auto k = x.component_at(c.i, c.j);
            REQUIRE(k.has_value());
            CHECK(max_abs_diff(c.gram(), x.components()[*k].gram()) < 1e-12);
        }
    }
    SUBCASE("permutation composition") {
        std::mt19937_64 rng(5150);
        for (int t = 0; t < 10; ++t) {
            const std::size_t n = 2 + t % 4;
            const auto s1 = random_permutation(rng, n);
            const auto s2 = random_permutation(rng, n);
            std::vector<Complex> ph(n, Complex(1.0, 0.0));
            const auto m1 = HilbertBimodule::line_bimodule(s1, ph);
            const auto m2 = HilbertBimodule::line_bimodule(s2, ph);
            const auto prod = tensor_product(m1, m2);
            for (std::size_t i = 0; i < n; ++i) CHECK(prod.component_dim(i, s2[s1[i]]) == 1);
            CHECK(is_imprimitivity(prod));
        }
    }
    SUBCASE("dimension formula") {
        std::vector<BimoduleComponent> c1, c2;
        c1.push_back({0, 0, ComplexMatrix::identity(2)});
        c1.push_back({0, 1, ComplexMatrix::identity(1)});
        c1.push_back({1, 1, ComplexMatrix::identity(3)});
        const HilbertBimodule m1(2, 2, c1);
        c2.push_back({0, 0, ComplexMatrix::identity(1)});
        c2.push_back({1, 0, ComplexMatrix::identity(2)});
        c2.push_back({1, 1, ComplexMatrix::identity(1)});
        const HilbertBimodule m2(2, 2, c2);
        const auto t = tensor_product(m1, m2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k) {
                std::size_t expect = 0;
                for (std::size_t j = 0; j < 2; ++j)
                    expect += m1.component_dim(i, j) * m2.component_dim(j, k);
                CHECK(t.component_dim(i, k) == expect);
            }
    }
    SUBCASE("algebra mismatch") {
        CHECK_THROWS_AS(tensor_product(all_lines(2, 3), all_lines(2, 2)), DimensionError);
    }
}

TEST_CASE("associativity up to the canonical permutation isomorphism") {
    std::vector<BimoduleComponent> cx, cy, cz;
    cx.push_back({0, 0, ComplexMatrix::identity(2)});
    cx.push_back({0, 1, ComplexMatrix::identity(1)});
    const HilbertBimodule x(1, 2, cx);
    cy.push_back({0, 0, ComplexMatrix::identity(1)});
    cy.push_back({1, 0, ComplexMatrix::identity(2)});
    cy.push_back({1, 1, ComplexMatrix::identity(1)});
    const HilbertBimodule y(2, 2, cy);
    cz.push_back({0, 0, ComplexMatrix::identity(2)});
    cz.push_back({1, 0, ComplexMatrix::identity(1)});
    const HilbertBimodule z(2, 1, cz);

    const auto left = tensor_product(tensor_product(x, y), z);
    const auto right = tensor_product(x, tensor_product(y, z));
    for (std::size_t i = 0; i < 1; ++i)
        for (std::size_t l = 0; l < 1; ++l) {
            CHECK(left.component_dim(i, l) == right.component_dim(i, l));
            const auto perm = associator_permutation(x, y, z, i, l);
            CHECK(unitarity_residual(perm) < 1e-14);
            const auto kl = left.component_at(i, l);
            const auto kr = right.component_at(i, l);
            REQUIRE(kl.has_value());
            REQUIRE(kr.has_value());
            // P maps right-bracketing coordinates to left-bracketing ones;
            // grams must transport.
            const auto gl = left.components()[*kl].gram();
            const auto gr = right.components()[*kr].gram();
            CHECK(max_abs_diff(perm.adjoint() * gl * perm, gr) < 1e-12);
        }
}

TEST_CASE("imprimitivity is invariant under componentwise unitaries") {
    std::mt19937_64 rng(31);
    const auto m = HilbertBimodule::line_bimodule({1, 2, 0}, {Complex(1, 0), Complex(0, 1),
                                                              Complex(-1, 0)});
    for (int t = 0; t < 10; ++t) {
        std::vector<ComplexMatrix> us;
        for (std::size_t k = 0; k < m.components().size(); ++k) {
            ComplexMatrix u(1, 1);
            u(0, 0) = random_phase(rng);
            us.push_back(u);
        }
        CHECK(is_imprimitivity(m.transform_components(us)));
    }
}

TEST_CASE("degenerate inputs rejected at construction") {
    CHECK_THROWS_AS(HilbertBimodule(2, 2, {}), ContractViolation);
    std::vector<BimoduleComponent> comps;
    ComplexMatrix dep(2, 2);
    dep(0, 0) = 1.0;
    dep(0, 1) = 1.0; // linearly dependent columns
    comps.push_back({0, 0, dep});
    CHECK_THROWS_AS(HilbertBimodule(1, 1, comps), ContractViolation);
}

TEST_CASE("module morphism pairs intertwine the actions through phi") {
    // left modules are bimodules with a one-block right algebra
    std::vector<BimoduleComponent> mc, nc;
    mc.push_back({0, 0, ComplexMatrix::identity(1)});
    mc.push_back({1, 0, ComplexMatrix::identity(1)});
    const HilbertBimodule m(2, 1, mc); // over C^2
    nc.push_back({0, 0, ComplexMatrix::identity(1)});
    nc.push_back({1, 0, ComplexMatrix::identity(1)});
    nc.push_back({2, 0, ComplexMatrix::identity(1)});
    const HilbertBimodule n(3, 1, nc); // over C^3

    const auto phi = AlgebraHomomorphism::from_index_map(
        m.left_algebra(), n.left_algebra(), {0, 0, 1});

    SUBCASE("the pullback-style map satisfies the intertwining identity") {
        // Phi(x)_j = x_{kappa(j)} maps the i-fiber into the phi(e_i) range
        ComplexMatrix map(3, 2);
        map(0, 0) = 1.0;
        map(1, 0) = 1.0;
        map(2, 1) = 1.0;
        const ModuleMorphismPair p{phi, map};
        CHECK(module_morphism_residual(m, n, p) < 1e-12);
    }
    SUBCASE("an index-crossing map fails") {
        ComplexMatrix map(3, 2);
        map(0, 1) = 1.0; // sends the 1-fiber into the range of phi(e_0)
        map(2, 0) = 1.0;
        const ModuleMorphismPair p{phi, map};
        CHECK(module_morphism_residual(m, n, p) > 0.5);
    }
    SUBCASE("shape mismatches are dimension errors") {
        const ModuleMorphismPair p{phi, ComplexMatrix::identity(2)};
        CHECK_THROWS_AS(module_morphism_residual(m, n, p), DimensionError);
    }
}
