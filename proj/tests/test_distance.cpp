#include "doctest.h"

#include <random>

#include "ncg/distance.hpp"

using namespace ncg;

namespace {

PureState character_state(const FiniteCStarAlgebra& a, std::size_t i) {
    return PureState::from_character(Character(a, i));
}

SpectralTriple random_commutative_triple(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::size_t> dims(n, 1);
    const FiniteCStarAlgebra a(dims);
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const Complex z(g(rng), i == j ? 0.0 : g(rng));
            d(i, j) = z;
            d(j, i) = std::conj(z);
        }
    return SpectralTriple(Representation::standard(a), d);
}

} // namespace

TEST_CASE("two-point Connes distance equals 1/|lambda|") {
    for (const Complex lambda : {Complex(0.5, 0.0), Complex(1.0, 0.0), Complex(2.0, 0.0),
                                 Complex(3.0, 4.0)}) {
        const auto t = two_point_triple(lambda);
        const auto w0 = character_state(t.algebra(), 0);
        const auto w1 = character_state(t.algebra(), 1);
        const auto res = connes_distance(t, w0, w1, 1e-9);
        const double expect = 1.0 / std::abs(lambda);
        INFO("lambda ", lambda.real(), "+", lambda.imag(), "i");
        CHECK(std::abs(res.value - expect) < 1e-7);
        CHECK(res.certified_gap < 1e-7);
        // witness feasibility and objective consistency
        CHECK(operator_norm(commutator(t.dirac(), t.pi(res.optimizer))) <= 1.0 + 1e-7);
        const double attained =
            std::abs((w0.evaluate(res.optimizer) - w1.evaluate(res.optimizer)).real());
        CHECK(attained >= res.value - 1e-9);
    }
}

TEST_CASE("identical states are at distance zero") {
    const auto t = two_point_triple(Complex(2.0, 0.0));
    const auto w0 = character_state(t.algebra(), 0);
    const auto res = connes_distance(t, w0, w0);
    CHECK(res.value == 0.0);
}

TEST_CASE("D = 0 puts distinct characters at infinite distance") {
    const FiniteCStarAlgebra c2({1, 1});
    const SpectralTriple t(Representation::standard(c2), ComplexMatrix(2, 2));
    const auto res =
        connes_distance(t, character_state(c2, 0), character_state(c2, 1));
    CHECK(res.infinite());
}

TEST_CASE("grid oracle") {
    const Complex lambda(2.0, 0.0);
    const auto t = two_point_triple(lambda);
    const auto w0 = character_state(t.algebra(), 0);
    const auto w1 = character_state(t.algebra(), 1);
    const double r = 5.0 / std::abs(lambda);
    const auto oracle = distance_oracle(t, w0, w1, r, 201);
    const double spacing = 2.0 * r / 200.0;
    CHECK(std::abs(oracle - 0.5) <= spacing + 1e-12);
    // oracle never exceeds the solver value beyond tolerance
    const auto solved = connes_distance(t, w0, w1, 1e-9);
    CHECK(oracle <= solved.value + 1e-7);

    CHECK(distance_oracle(t, w0, w0, 1.0, 11) == 0.0);

    const FiniteCStarAlgebra big({3, 2}); // self-adjoint dimension 13
    CHECK_THROWS_AS(distance_oracle(SpectralTriple(Representation::standard(big),
                                                   ComplexMatrix(5, 5)),
                                    PureState(big, 0, {1.0, 0.0, 0.0}),
                                    PureState(big, 1, {1.0, 0.0}), 1.0, 3),
                    RefusalError);
}

TEST_CASE("solver vs oracle on random commutative triples") {
    std::mt19937_64 rng(1717);
    int finite_cases = 0;
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 3;
        const auto t = random_commutative_triple(rng, n);
        const auto w0 = character_state(t.algebra(), 0);
        const auto w1 = character_state(t.algebra(), 1);
        const auto solved = connes_distance(t, w0, w1, 1e-9);
        if (solved.infinite()) continue;
        ++finite_cases;
        double peak = 0.0;
        for (const auto& co : solved.optimizer.coords()) peak = std::max(peak, std::abs(co));
        const double r = 1.5 * std::max(peak, 1e-3);
        const std::size_t steps = 41;
        const auto oracle = distance_oracle(t, w0, w1, r, steps);
        CHECK(oracle <= solved.value + 1e-7);
        // the grid resolution bound: the optimum moved to the nearest
        // feasible grid point loses at most a few spacings of objective
        const double spacing = 2.0 * r / double(steps - 1);
        CHECK(solved.value - oracle <= 1e-7 + 6.0 * spacing);
    }
    CHECK(finite_cases > 0);
}

TEST_CASE("distance properties: symmetry, scaling, triangle inequality") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 6; ++trial) {
        const auto t = random_commutative_triple(rng, 3);
        const auto& a = t.algebra();
        std::vector<PureState> states{character_state(a, 0), character_state(a, 1),
                                      character_state(a, 2)};
        const auto m = distance_matrix(t, states, 1e-9);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(m.entries[i][i].value == 0.0);
            for (std::size_t j = 0; j < 3; ++j) {
                const auto& dij = m.entries[i][j];
                const auto& dji = m.entries[j][i];
                CHECK(dij.infinite() == dji.infinite());
                if (!dij.infinite()) CHECK(std::abs(dij.value - dji.value) < 2e-6);
            }
        }
        // triangle inequality on finite triples
        const auto& d01 = m.entries[0][1];
        const auto& d12 = m.entries[1][2];
        const auto& d02 = m.entries[0][2];
        if (!d01.infinite() && !d12.infinite() && !d02.infinite())
            CHECK(d02.value <= d01.value + d12.value + 2e-6);

        // scaling: doubling D halves finite distances
        const auto t2 = t.with_dirac(t.dirac() * Complex(2.0, 0.0));
        const auto d01b = connes_distance(t2, states[0], states[1], 1e-9);
        if (!d01.infinite()) CHECK(std::abs(d01b.value - 0.5 * d01.value) < 1e-5);
    }
}

TEST_CASE("isometry invariance under unitary conjugation") {
    std::mt19937_64 rng(31415);
    std::normal_distribution<double> g(0.0, 1.0);
    const auto t = two_point_triple(Complex(1.5, -0.5));
    ComplexMatrix h(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) h(i, j) = Complex(g(rng), g(rng));
    const auto w = hermitian_eig((h + h.adjoint()) * Complex(0.5, 0.0)).vectors;
    const auto tc = t.conjugated(w);
    const auto w0 = character_state(t.algebra(), 0);
    const auto w1 = character_state(t.algebra(), 1);
    const auto d1 = connes_distance(t, w0, w1, 1e-9);
    const auto d2 = connes_distance(tc, w0, w1, 1e-9);
    CHECK(std::abs(d1.value - d2.value) < 1e-7);
}

TEST_CASE("state/algebra mismatch is a domain error") {
    const auto t = two_point_triple(Complex(1.0, 0.0));
    const FiniteCStarAlgebra other({1, 1, 1});
    CHECK_THROWS_AS(connes_distance(t, character_state(other, 0),
                                    character_state(other, 1)),
                    DomainError);
}

TEST_CASE("matrix-block states with matching commutant profile: pinned value") {
    // A = M2, D = diag(1,-1): the commutator kernel is the diagonal part,
    // so vector states with equal coordinate moduli are at finite distance;
    // for xi1 = (1,1)/sqrt2 and xi2 = (1,i)/sqrt2 the supremum is
    // |c1 - c2| with c = conj(xi_1) xi_0, i.e. |1/2 + i/2| = sqrt(2)/2.
    const FiniteCStarAlgebra m2({2});
    const SpectralTriple t(Representation::standard(m2),
                           ComplexMatrix::diagonal({1.0, -1.0}));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const PureState w1(m2, 0, {Complex(inv_sqrt2, 0.0), Complex(inv_sqrt2, 0.0)});
    const PureState w2(m2, 0, {Complex(inv_sqrt2, 0.0), Complex(0.0, inv_sqrt2)});
    const auto res = connes_distance(t, w1, w2, 1e-9);
    const double expect = std::sqrt(2.0) / 2.0;
    CHECK(std::abs(res.value - expect) < 1e-7);

    // the grid oracle (self-adjoint dimension 4) bounds it from below
    const double oracle = distance_oracle(t, w1, w2, 1.0, 13);
    CHECK(oracle <= res.value + 1e-7);
    CHECK(res.value - oracle <= 1e-7 + 6.0 * (2.0 / 12.0));

    // states differing on the commutant of D are infinitely far apart
    const PureState w3(m2, 0, {Complex(1.0, 0.0), Complex(0.0, 0.0)});
    CHECK(connes_distance(t, w1, w3, 1e-9).infinite());
}
