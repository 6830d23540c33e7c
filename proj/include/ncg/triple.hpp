#pragma once

// Finite spectral triples and executable validators for the axioms that are
// meaningful at finite dimension: evenness, reality with the KO sign table,
// orientability through Hochschild cycles, irreducibility through the joint
// commutant. Compact resolvent and bounded commutators hold automatically
// here and are reported as trivial; Dixmier-trace dimensionality is reported
// not applicable.

#include <cstddef>
#include <optional>
#include <vector>

#include "ncg/algebra.hpp"
#include "ncg/matrix.hpp"
#include "ncg/report.hpp"

namespace ncg {

// pi = U (blocks (x) I_multiplicity, summed over blocks) U^H
class Representation {
public:
    Representation(FiniteCStarAlgebra algebra, std::vector<std::size_t> multiplicities,
                   ComplexMatrix basis_change, double tol = 1e-8);

    // Multiplicity-one representation in the standard basis.
    static Representation standard(const FiniteCStarAlgebra& algebra);

    const FiniteCStarAlgebra& algebra() const { return algebra_; }
    const std::vector<std::size_t>& multiplicities() const { return mults_; }
    const ComplexMatrix& basis_change() const { return u_; }

    std::size_t dim() const { return dim_; }
    bool faithful() const;

    ComplexMatrix pi(const AlgebraElement& a) const;
    // pi applied to every matrix unit of the algebra.
    std::vector<ComplexMatrix> generator_images() const;

    // Worst unital *-homomorphism residual of pi over the matrix units.
    double hom_residual() const;

private:
    FiniteCStarAlgebra algebra_;
    std::vector<std::size_t> mults_;
    ComplexMatrix u_;
    std::size_t dim_ = 0;
};

struct KOSigns {
    int eps;        // J^2 = eps
    int eps_prime;  // J D = eps' D J
    int eps_second; // J Gamma = eps'' Gamma J (even labels only)
};

// The sign table for n mod 8. A '-' entry in the bracket rows of the source
// table means the commutator vanishes, '+' the anticommutator; translated
// here into the signs of J^2 = eps, JD = eps' DJ, JGamma = eps'' Gamma J.
KOSigns ko_signs(int n);

class SpectralTriple {
public:
    SpectralTriple(Representation rep, ComplexMatrix dirac,
                   std::optional<ComplexMatrix> grading = std::nullopt,
                   std::optional<AntiunitaryOperator> real_structure = std::nullopt,
                   std::optional<int> ko_dimension = std::nullopt, double tol = 1e-8);

    const Representation& rep() const { return rep_; }
    const FiniteCStarAlgebra& algebra() const { return rep_.algebra(); }
    const ComplexMatrix& dirac() const { return dirac_; }
    const std::optional<ComplexMatrix>& grading() const { return grading_; }
    const std::optional<AntiunitaryOperator>& real_structure() const { return j_; }
    std::optional<int> ko_dimension() const { return ko_; }

    std::size_t dim() const { return rep_.dim(); }
    ComplexMatrix pi(const AlgebraElement& a) const { return rep_.pi(a); }
    // Opposite action J pi(b^*) J^{-1}.
    ComplexMatrix opposite(const AlgebraElement& b) const;

    SpectralTriple with_dirac(ComplexMatrix d) const;
    // Simultaneous unitary conjugation of (pi, D, Gamma, J).
    SpectralTriple conjugated(const ComplexMatrix& w) const;

private:
    Representation rep_;
    ComplexMatrix dirac_;
    std::optional<ComplexMatrix> grading_;
    std::optional<AntiunitaryOperator> j_;
    std::optional<int> ko_;
};

// Model triples pinning every row of the sign table, one per KO label;
// the algebra is the scalars so the order conditions hold identically and
// the sign checks carry all the content. D is nonzero in every one, so a
// wrong JD sign cannot pass by accident.
SpectralTriple canonical_real_triple(int ko);

// Two-point space triple: A = C^2 diagonal on C^2, D = [[0, conj(l)], [l, 0]],
// grading diag(1, -1).
SpectralTriple two_point_triple(Complex lambda, bool with_grading = true);

Report validate_even(const SpectralTriple& t, double tol = kDefaultTol);
Report validate_real(const SpectralTriple& t, double tol = kDefaultTol);

struct FormSpace {
    std::size_t degree = 0;
    // Orthonormal under the Frobenius inner product.
    std::vector<ComplexMatrix> basis;

    double projection_residual(const ComplexMatrix& m) const;
    bool contains(const ComplexMatrix& m, double tol = kDefaultTol) const;
    std::size_t dimension() const { return basis.size(); }
};

// Omega_D(A) up to the given degree; degree-0 terms are pi(a0) alone.
FormSpace omega_forms(const SpectralTriple& t, std::size_t degree);

struct ChainTerm {
    Complex coeff;
    std::vector<AlgebraElement> factors; // degree + 1 entries
};

struct HochschildChain {
    std::size_t degree = 0;
    std::vector<ChainTerm> terms;

    static HochschildChain unit_chain(const FiniteCStarAlgebra& a);
};

ComplexMatrix evaluate_chain(const SpectralTriple& t, const HochschildChain& c);

// Standard boundary b(a0 (x) ... (x) an); the degree-0 boundary is zero.
HochschildChain hochschild_boundary(const HochschildChain& c);

// Coordinates of the chain in the tensor-power basis of the algebra.
std::vector<Complex> chain_tensor_coords(const HochschildChain& c);

Report validate_orientability(const SpectralTriple& t, const HochschildChain& c,
                              double tol = kDefaultTol);

// Least-squares search for a Hochschild cycle of the exact given degree
// whose representation matches the grading (even) or identity (odd).
std::optional<HochschildChain> find_orientation_cycle(const SpectralTriple& t,
                                                      std::size_t degree,
                                                      double residual_cap = 1e-6);

bool is_irreducible(const SpectralTriple& t);

// One entry per axiom; classification entries ("orientable", "irreducible")
// describe properties rather than validity.
Report axiom_report(const SpectralTriple& t, double tol = kDefaultTol);

struct RecoveredStructure {
    Representation rep; // canonical block form, blocks sorted by (n, m)
    double residual;    // worst span-match defect in both directions
};

// Structure recovery: given matrices spanning a unital *-closed subalgebra
// of M_d, produce the canonical block form (block dimensions, multiplicities
// and the unitary change of basis) realizing it as U (sum_i M_{n_i} (x)
// I_{m_i}) U^H. Inputs that are not a unital *-closed algebra are rejected.
RecoveredStructure recover_block_structure(const std::vector<ComplexMatrix>& spanning,
                                           double tol = 1e-8);

} // namespace ncg
