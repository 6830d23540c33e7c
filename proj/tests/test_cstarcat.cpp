#include "doctest.h"

#include "ncg/cstarcat.hpp"

using namespace ncg;

namespace {

// Two objects over one base point: every hom-space is a chosen unit line.
FiniteCStarCategory two_objects_one_point(Complex phase) {
    std::vector<std::vector<ComplexMatrix>> homs(4);
    auto line = [](Complex z) {
        ComplexMatrix m(1, 1);
        m(0, 0) = z;
        return std::vector<ComplexMatrix>{m};
    };
    homs[0] = line(1.0);   // AA
    homs[1] = line(phase); // AB
    homs[2] = line(std::conj(phase)); // BA
    homs[3] = line(1.0);   // BB
    return FiniteCStarCategory({"A", "B"}, {1, 1}, homs);
}

// Two objects, diagonals C^2 each, hom-spaces spanned by the two point
// lines with phases.
FiniteCStarCategory two_objects_two_points(Complex ph0, Complex ph1) {
    std::vector<std::vector<ComplexMatrix>> homs(4);
    auto diag_units = [] {
        std::vector<ComplexMatrix> basis;
        for (std::size_t i = 0; i < 2; ++i) {
            ComplexMatrix e(2, 2);
            e(i, i) = 1.0;
            basis.push_back(std::move(e));
        }
        return basis;
    };
    homs[0] = diag_units();
    homs[3] = diag_units();
    std::vector<ComplexMatrix> ab, ba;
    {
        ComplexMatrix e0(2, 2), e1(2, 2);
        e0(0, 0) = ph0;
        e1(1, 1) = ph1;
        ab = {e0, e1};
        ba = {e0.adjoint(), e1.adjoint()};
    }
    homs[1] = ab;
    homs[2] = ba;
    return FiniteCStarCategory({"A", "B"}, {2, 2}, homs);
}

} // namespace

TEST_CASE("validate_category") {
    SUBCASE("one object, scalars") {
        const FiniteCStarCategory c({"A"}, {1},
                                    {{ComplexMatrix::identity(1)}});
        CHECK(validate_category(c).passed());
    }
    SUBCASE("two objects over one point with a unit line") {
        const auto c = two_objects_one_point(Complex(0.0, 1.0));
        const auto rep = validate_category(c);
        CHECK(rep.passed());
    }
    SUBCASE("zero hom-space breaks fullness") {
        std::vector<std::vector<ComplexMatrix>> homs(4);
        homs[0] = {ComplexMatrix::identity(1)};
        homs[3] = {ComplexMatrix::identity(1)};
        const FiniteCStarCategory c({"A", "B"}, {1, 1}, homs);
        const auto rep = validate_category(c);
        CHECK(!rep.passed());
        CHECK(rep.find("fullness")->status == CheckStatus::Fail);
    }
    SUBCASE("non-closed composition is caught") {
        // C_AA = span{I, N} with N nilpotent is not closed under products
        ComplexMatrix nil(2, 2);
        nil(0, 1) = 1.0;
        const FiniteCStarCategory c({"A"}, {2},
                                    {{ComplexMatrix::identity(2), nil}});
        const auto rep = validate_category(c);
        CHECK(!rep.passed());
    }
}

TEST_CASE("star functor enumeration") {
    SUBCASE("one object C^n: exactly n characters") {
        for (std::size_t n = 1; n <= 4; ++n) {
            const auto c = FiniteCStarCategory::one_object_diagonal(n);
            const auto fs = enumerate_star_functors(c);
            CHECK(fs.size() == n);
            for (const auto& f : fs) CHECK(star_functor_residual(c, f) < 1e-9);
        }
    }
    SUBCASE("two objects over one point: canonical value is the arrow norm") {
        const auto c = two_objects_one_point(Complex(0.0, 1.0));
        const auto spec = analyze_category(c);
        REQUIRE(spec.points.size() == 1);
        const auto& canonical = spec.functors[spec.canonical[0]];
        // omega(generator) = ||generator|| = 1, real positive
        const Complex v = canonical.values[c.pair_index(0, 1)][0];
        CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-9);
        for (const auto& f : spec.functors) CHECK(star_functor_residual(c, f) < 1e-9);
    }
    SUBCASE("functor values respect the involution") {
        const auto c = two_objects_two_points(Complex(0.0, 1.0), Complex(-1.0, 0.0));
        for (const auto& f : enumerate_star_functors(c)) {
            CHECK(star_functor_residual(c, f) < 1e-9);
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b)
                    for (std::size_t i = 0; i < c.hom_dim(a, b); ++i) {
                        const auto [coeffs, res] =
                            c.expand(b, a, c.hom_basis(a, b)[i].adjoint());
                        CHECK(res < 1e-9);
                        CHECK(std::abs(f.evaluate(c, b, a, coeffs) -
                                       std::conj(f.values[c.pair_index(a, b)][i])) <
                              1e-9);
                    }
        }
    }
    SUBCASE("positive on a* a") {
        const auto c = two_objects_two_points(Complex(1.0, 0.0), Complex(0.0, -1.0));
        for (const auto& f : enumerate_star_functors(c)) {
            for (std::size_t a = 0; a < 2; ++a)
                for (const auto& x : c.hom_basis(a, a)) {
                    const auto [coeffs, res] = c.expand(a, a, x.adjoint() * x);
                    CHECK(res < 1e-9);
                    CHECK(f.evaluate(c, a, a, coeffs).real() >= -1e-12);
                }
        }
    }
}

TEST_CASE("base spectrum") {
    SUBCASE("one object C^n has n points") {
        const auto pts = base_spectrum(FiniteCStarCategory::one_object_diagonal(3));
        CHECK(pts.size() == 3);
    }
    SUBCASE("two objects with two points each") {
        const auto c = two_objects_two_points(Complex(0.0, 1.0), Complex(1.0, 0.0));
        const auto spec = analyze_category(c);
        CHECK(spec.points.size() == 2);
        // every returned functor maps onto its class; each class has a
        // canonical representative, so the quotient map is surjective
        std::vector<bool> covered(spec.points.size(), false);
        for (std::size_t i = 0; i < spec.functors.size(); ++i)
            covered[spec.functor_class[i]] = true;
        for (bool b : covered) CHECK(b);
        // functors in the same class agree on all diagonals
        for (std::size_t i = 0; i < spec.functors.size(); ++i)
            for (std::size_t j = i + 1; j < spec.functors.size(); ++j) {
                bool diag_equal = true;
                for (std::size_t a = 0; a < 2; ++a)
                    for (std::size_t k = 0; k < c.hom_dim(a, a); ++k)
                        if (std::abs(spec.functors[i].values[c.pair_index(a, a)][k] -
                                     spec.functors[j].values[c.pair_index(a, a)][k]) >
                            1e-9)
                            diag_equal = false;
                CHECK(diag_equal == (spec.functor_class[i] == spec.functor_class[j]));
            }
    }
    SUBCASE("non-commutative diagonal is rejected") {
        std::vector<ComplexMatrix> full;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                ComplexMatrix e(2, 2);
                e(i, j) = 1.0;
                full.push_back(std::move(e));
            }
        const FiniteCStarCategory c({"A"}, {2}, {full});
        CHECK_THROWS_AS(enumerate_star_functors(c), PreconditionError);
    }
}

TEST_CASE("category functors") {
    const auto c = two_objects_two_points(Complex(0.0, 1.0), Complex(1.0, 0.0));
    SUBCASE("identity validates") {
        const auto f = identity_functor(c);
        CHECK(validate_category_functor(c, c, f).passed());
    }
    SUBCASE("object swap acting identically on matrices validates") {
        // both Hilbert spaces are C^2 and the hom spans coincide as matrix
        // spaces, so swapping the objects while keeping each matrix is a
        // *-functor; its coordinate maps come from re-expansion
        CategoryFunctor f;
        f.object_map = {1, 0};
        f.hom_maps.resize(4);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
                const std::size_t ta = f.object_map[a], tb = f.object_map[b];
                ComplexMatrix map(c.hom_dim(ta, tb), c.hom_dim(a, b));
                for (std::size_t i = 0; i < c.hom_dim(a, b); ++i) {
                    const auto [coeffs, res] = c.expand(ta, tb, c.hom_basis(a, b)[i]);
                    REQUIRE(res < 1e-10);
                    for (std::size_t k = 0; k < coeffs.size(); ++k) map(k, i) = coeffs[k];
                }
                f.hom_maps[c.pair_index(a, b)] = map;
            }
        const auto rep = validate_category_functor(c, c, f);
        CHECK(rep.passed());
        const auto sq = compose_functors(c, c, c, f, f);
        CHECK(validate_category_functor(c, c, sq).passed());
    }
}
