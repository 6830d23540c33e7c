#pragma once

// Morphisms of spectral triples in the three flavors (totally-geodesic-spin,
// Riemannian, metric), unitary equivalence as a special case, inner
// fluctuations D + A + J A J^{-1}, and Morita morphisms carrying a
// connection.
//
// A connection on an A1-A2 bimodule X is stored by its values on the basis:
// nabla(xi_r) = sum_s xi_s (x) omega_rs with omega_rs a one-form of the
// target triple, kept in the balanced-canonical gauge omega_rs =
// pi(e_{j_s}) omega_rs. Values carry generating pairs so that composition
// can re-interpret them through the inner-deformation Dirac operator of the
// other morphism; the induced operator on the materialized module
// X (x)_A2 H2 is what all the "up to canonical isomorphism" comparisons use.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ncg/bimodule.hpp"
#include "ncg/distance.hpp"
#include "ncg/triple.hpp"

namespace ncg {

struct MorphismFlags {
    bool check_real = false;
    bool check_even = false;
};

struct TripleMorphism {
    SpectralTriple source;
    SpectralTriple target;
    AlgebraHomomorphism phi;
    ComplexMatrix intertwiner; // H1 -> H2
    MorphismFlags flags;

    double intertwiner_norm() const { return operator_norm(intertwiner); }
};

TripleMorphism identity_morphism(const SpectralTriple& t);
// Unitary equivalence morphism onto t.conjugated(w).
TripleMorphism unitary_equivalence(const SpectralTriple& t, const ComplexMatrix& w);
TripleMorphism compose(const TripleMorphism& outer, const TripleMorphism& inner);

// pi2(phi(x)) Phi = Phi pi1(x) and D2 Phi = Phi D1; with the flags also
// J2 Phi = Phi J1 and Gamma2 Phi = Phi Gamma1.
Report validate_tgs(const TripleMorphism& m, double tol = kDefaultTol);

// Representation intertwining plus [D2, phi(x)] Phi = Phi [D1, x]; strictly
// weaker than the tgs conditions.
Report validate_riemannian(const TripleMorphism& m, double tol = kDefaultTol);

// phi must be a unital epimorphism; the pull-back of every pure-state pair
// must preserve the Connes distance (matching infinite values pass).
// Commutative algebras enumerate their characters themselves.
Report validate_metric(const TripleMorphism& m, double tol = 1e-6,
                       double solver_tol = 1e-8);
// Non-commutative variant: caller supplies (target state, pulled-back
// source state) pairs.
Report validate_metric(const TripleMorphism& m,
                       const std::vector<std::pair<PureState, PureState>>& samples,
                       double tol = 1e-6, double solver_tol = 1e-8);

// A = sum_i c_i pi(a_i) [D, pi(b_i)], kept with its generating pairs.
class OneForm {
public:
    struct Pair {
        AlgebraElement left;
        AlgebraElement right;
        Complex coeff;
    };

    OneForm(const SpectralTriple& t, std::vector<Pair> pairs);
    static OneForm zero(const SpectralTriple& t);

    const std::vector<Pair>& pairs() const { return pairs_; }
    const ComplexMatrix& value() const { return value_; }

    OneForm scaled(Complex s) const;
    OneForm plus(const OneForm& o) const;

    // Membership in Omega^1_D(A), as a projection residual.
    double form_space_residual(const SpectralTriple& t) const;

private:
    OneForm() = default;
    std::vector<Pair> pairs_;
    ComplexMatrix value_;
};

struct FluctuationResult {
    SpectralTriple triple;
    Report report;
    bool symmetrized = false;
};

// D + A + J A J^{-1}; non-self-adjoint A is symmetrized with a warning
// entry. The zeroth-order condition of the output is re-validated.
FluctuationResult inner_fluctuation(const SpectralTriple& t, const OneForm& a,
                                    double tol = kDefaultTol);

class MoritaConnection {
public:
    struct Term {
        std::size_t target_index; // s in xi_s (x) omega
        OneForm form;             // one-form of the target triple
    };

    MoritaConnection(SpectralTriple source, SpectralTriple target, HilbertBimodule bimodule,
                     std::vector<std::vector<Term>> values);

    // Flat connection nabla(xi_r) = xi_r (x) pi(e_{j_r}) [D, pi(e_{j_r})].
    static MoritaConnection flat(const SpectralTriple& source, const SpectralTriple& target,
                                 const HilbertBimodule& bimodule);
    // Identity Morita morphism of t: identity bimodule with the connection
    // a |-> 1 (x) [D, pi(a)], which reproduces D on A (x)_A H.
    static MoritaConnection identity(const SpectralTriple& t);

    const SpectralTriple& source() const { return source_; }
    const SpectralTriple& target() const { return target_; }
    const HilbertBimodule& bimodule() const { return bimodule_; }
    const std::vector<std::vector<Term>>& values() const { return values_; }

    // Worst defect of nabla(xi a) = nabla(xi) a + xi (x) [D, pi(a)] over the
    // basis and the right-algebra idempotents, in the canonical gauge.
    double leibniz_residual() const;

    // The inner-deformation Dirac operator on the materialized module
    // X (x)_A2 H2, in the canonical product basis.
    ComplexMatrix module_dirac() const;
    // Hermitian-compatibility defect of the connection = Hermiticity defect
    // of the module Dirac operator.
    double hermitian_compatibility_residual() const;

private:
    SpectralTriple source_;
    SpectralTriple target_;
    HilbertBimodule bimodule_;
    std::vector<std::vector<Term>> values_;
};

// Composition (X2, nabla2) o (X1, nabla1) along a shared middle triple:
// X3 = X1 (x)_A2 X2 with
// nabla3(x1 (x) x2)(h3) = x1 (x) (nabla2 x2)(h3) + (nabla1 x1)(x2 (x) h3),
// the second term read through the inner-deformation Dirac of m2.
MoritaConnection compose_morita_connes(const MoritaConnection& m2,
                                       const MoritaConnection& m1);

// Unitary between the materialized modules of two connections whose
// bimodules are related by a global basis-index bijection (index_map[r3]
// gives the basis index in `reference`). Used for the unit and
// associativity laws.
double module_dirac_residual(const MoritaConnection& composed,
                             const MoritaConnection& reference,
                             const std::vector<std::size_t>& index_map);

// Global basis-index maps for the canonical isomorphisms.
std::vector<std::size_t> unit_left_index_map(const MoritaConnection& m);  // id o m
std::vector<std::size_t> unit_right_index_map(const MoritaConnection& m); // m o id
// ((x (x) y) (x) z) -> (x (x) (y (x) z)) on global indices.
std::vector<std::size_t> associator_index_map(const HilbertBimodule& x,
                                              const HilbertBimodule& y,
                                              const HilbertBimodule& z);

} // namespace ncg
