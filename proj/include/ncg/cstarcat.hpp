#pragma once

// Finite commutative full C*-categories in an operator model: hom-spaces are
// concrete spaces of matrices between designated finite Hilbert spaces, so
// the Banach/C*-axioms hold by construction and validation reduces to
// closure, commutativity and fullness rank checks. C-valued *-functors are
// enumerated from a deterministic spanning tree (star at the least object),
// and the base spectrum is their quotient by agreement on the diagonals.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ncg/matrix.hpp"
#include "ncg/report.hpp"

namespace ncg {

class FiniteCStarCategory {
public:
    FiniteCStarCategory(std::vector<std::string> objects,
                        std::vector<std::size_t> hilbert_dims,
                        std::vector<std::vector<ComplexMatrix>> hom_bases);

    // Single object "A" with C_AA = the diagonal matrices on C^n.
    static FiniteCStarCategory one_object_diagonal(std::size_t n);

    std::size_t object_count() const { return objects_.size(); }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::size_t>& hilbert_dims() const { return dims_; }

    std::size_t pair_index(std::size_t a, std::size_t b) const {
        return a * objects_.size() + b;
    }
    const std::vector<ComplexMatrix>& hom_basis(std::size_t a, std::size_t b) const {
        return homs_[pair_index(a, b)];
    }
    std::size_t hom_dim(std::size_t a, std::size_t b) const {
        return homs_[pair_index(a, b)].size();
    }

    // Least-squares coordinates of m in the (A,B) hom basis plus the
    // projection residual.
    std::pair<std::vector<Complex>, double> expand(std::size_t a, std::size_t b,
                                                   const ComplexMatrix& m) const;

    ComplexMatrix assemble(std::size_t a, std::size_t b,
                           const std::vector<Complex>& coeffs) const;

private:
    std::vector<std::string> objects_;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<ComplexMatrix>> homs_;
};

Report validate_category(const FiniteCStarCategory& c, double tol = kDefaultTol);

// C-valued *-functor, stored by its values on every hom basis.
struct StarFunctor {
    std::vector<std::vector<Complex>> values; // [pair_index][basis index]

    Complex evaluate(const FiniteCStarCategory& c, std::size_t a, std::size_t b,
                     const std::vector<Complex>& coeffs) const;
};

// Worst multiplicativity/involution/unitality defect of the functor over
// the hom bases.
double star_functor_residual(const FiniteCStarCategory& c, const StarFunctor& f);

struct BaseSpectrumPoint {
    // character index per object, in the deterministic diagonal order
    std::vector<std::size_t> character_indices;
};

struct CategorySpectrum {
    struct DiagonalCharacter {
        ComplexMatrix projector;     // joint eigenspace projector in B(H_A)
        std::vector<Complex> values; // on the C_AA hom basis
    };
    std::vector<std::vector<DiagonalCharacter>> diagonals; // [object][character]
    std::vector<BaseSpectrumPoint> points;
    std::vector<StarFunctor> functors;       // canonical per point, then variants
    std::vector<std::size_t> functor_class;  // functor -> base point
    std::vector<std::size_t> canonical;      // base point -> index into functors
};

// Characters of the diagonals, the compatibility bijections along the
// spanning tree, the base points and a finite list of representative
// functors (the canonical tree-phase-one representative per point plus
// phase-twisted variants drawn from the canonical functor's value phases).
CategorySpectrum analyze_category(const FiniteCStarCategory& c, double tol = kDefaultTol);

std::vector<StarFunctor> enumerate_star_functors(const FiniteCStarCategory& c,
                                                 double tol = kDefaultTol);

std::vector<BaseSpectrumPoint> base_spectrum(const FiniteCStarCategory& c,
                                             double tol = kDefaultTol);

// Object-bijective *-functor between categories, stored as coordinate maps
// per hom-space.
struct CategoryFunctor {
    std::vector<std::size_t> object_map;  // source object -> target object
    std::vector<ComplexMatrix> hom_maps;  // [source pair] coords -> target coords

    ComplexMatrix apply(const FiniteCStarCategory& source,
                        const FiniteCStarCategory& target, std::size_t a, std::size_t b,
                        const ComplexMatrix& m) const;
};

CategoryFunctor identity_functor(const FiniteCStarCategory& c);

// Multiplicativity, involution, unitality and object bijectivity of the
// functor data between the two categories.
Report validate_category_functor(const FiniteCStarCategory& source,
                                 const FiniteCStarCategory& target,
                                 const CategoryFunctor& f, double tol = kDefaultTol);

CategoryFunctor compose_functors(const FiniteCStarCategory& a,
                                 const FiniteCStarCategory& b,
                                 const FiniteCStarCategory& c, const CategoryFunctor& outer,
                                 const CategoryFunctor& inner);

} // namespace ncg
