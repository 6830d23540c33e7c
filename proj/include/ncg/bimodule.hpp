#pragma once

// Hilbert C*-bimodules over finite commutative algebras C^m - C^n. A
// bimodule is a grid of finite-dimensional inner-product spaces M_{ij}; the
// left algebra acts through coordinate i, the right algebra through
// coordinate j. Component spaces carry an explicit basis embedded in an
// ambient coordinate space, so gauge data (phases of chosen generators)
// is real and the canonical-representative machinery has something to do.

#include <cstddef>
#include <optional>
#include <vector>

#include "ncg/algebra.hpp"
#include "ncg/matrix.hpp"

namespace ncg {

struct BimoduleComponent {
    std::size_t i = 0; // left block index
    std::size_t j = 0; // right block index
    // ambient_dim x dim; columns are the basis vectors of M_{ij}.
    ComplexMatrix basis;

    std::size_t dim() const { return basis.cols(); }
    ComplexMatrix gram() const { return basis.adjoint() * basis; }
};

class BimoduleElement;

class HilbertBimodule {
public:
    HilbertBimodule(std::size_t left_blocks, std::size_t right_blocks,
                    std::vector<BimoduleComponent> components);

    // Identity bimodule of C^n over itself: one line on each diagonal cell.
    static HilbertBimodule identity(std::size_t n);
    // Line bimodule supported on the graph of a permutation, with the given
    // unit generators (one phase per point).
    static HilbertBimodule line_bimodule(const std::vector<std::size_t>& sigma,
                                         const std::vector<Complex>& phases);

    std::size_t left_blocks() const { return m_; }
    std::size_t right_blocks() const { return n_; }
    FiniteCStarAlgebra left_algebra() const;
    FiniteCStarAlgebra right_algebra() const;

    const std::vector<BimoduleComponent>& components() const { return comps_; }
    // Index into components() or nullopt when M_{ij} = 0.
    std::optional<std::size_t> component_at(std::size_t i, std::size_t j) const;
    std::size_t component_dim(std::size_t i, std::size_t j) const;
    std::size_t total_dim() const;

    BimoduleElement zero_element() const;
    // Basis element: unit coordinate c of component k.
    BimoduleElement basis_element(std::size_t k, std::size_t c) const;
    std::vector<BimoduleElement> basis() const;

    // New bimodule whose component bases are transformed by the given
    // coordinate-change matrices (dim x dim, one per component).
    HilbertBimodule transform_components(const std::vector<ComplexMatrix>& u) const;

    bool is_symmetric(double tol = kDefaultTol) const;

private:
    std::size_t m_ = 0, n_ = 0;
    std::vector<BimoduleComponent> comps_;
};

class BimoduleElement {
public:
    BimoduleElement(const HilbertBimodule& parent, std::vector<std::vector<Complex>> coords);

    const std::vector<std::vector<Complex>>& coords() const { return coords_; }

    BimoduleElement operator+(const BimoduleElement& o) const;
    BimoduleElement operator*(Complex s) const;
    BimoduleElement left_action(const AlgebraElement& a) const;
    BimoduleElement right_action(const AlgebraElement& b) const;

    const HilbertBimodule& parent() const { return *parent_; }

private:
    const HilbertBimodule* parent_;
    std::vector<std::vector<Complex>> coords_;
};

// A-valued inner product, linear in x: <a.x, y>_A = a <x, y>_A.
AlgebraElement left_inner(const BimoduleElement& x, const BimoduleElement& y);
// B-valued inner product, linear in y: <x, y.b>_B = <x, y>_B b.
AlgebraElement right_inner(const BimoduleElement& x, const BimoduleElement& y);

// Takahashi-style morphism of left modules along an algebra homomorphism:
// a pair (phi, Phi) with Phi(a x) = phi(a) Phi(x). Phi is stored over the
// global basis coordinates of the two modules.
struct ModuleMorphismPair {
    AlgebraHomomorphism phi; // left algebra of the source -> of the target
    ComplexMatrix map;       // target total dim x source total dim
};

// Worst defect of Phi(a x) = phi(a) Phi(x) over the source basis and the
// source algebra's minimal idempotents.
double module_morphism_residual(const HilbertBimodule& source,
                                const HilbertBimodule& target,
                                const ModuleMorphismPair& p);

enum class ModuleSide { Left, Right };

// Fullness: the span of the algebra-valued inner products is the whole
// algebra (rank check over all basis pairs).
bool is_full(const HilbertBimodule& m, ModuleSide side, double tol = kDefaultTol);

// Imprimitivity: full on both sides and A<x,y>.z = x.<y,z>_B on the whole
// basis. Nothing about the shape is assumed; the identity decides.
bool is_imprimitivity(const HilbertBimodule& m, double tol = kDefaultTol);

struct SpectralDecompositionResult {
    // sigma[i] = the unique right index paired with left index i.
    std::vector<std::size_t> sigma;
    // Canonical unit generator per graph point, in ambient coordinates of
    // the input component (first standard basis image, real-positive
    // leading component).
    std::vector<std::vector<Complex>> fiber_vectors;
    // Line bimodule over the graph with canonical unit generators.
    HilbertBimodule reconstruction;
    // 1x1 coordinate unitaries input -> reconstruction, one per point.
    std::vector<Complex> iso_scalars;
    // Worst inner-product mismatch under the exhibited isomorphism.
    double residual = 0.0;
};

// The imprimitivity-bimodule spectral theorem at finite scale: recover the
// base bijection and the line-bundle data, and exhibit the reconstruction
// isomorphism.
SpectralDecompositionResult spectral_decomposition(const HilbertBimodule& m,
                                                   double tol = kDefaultTol);

// Fibers of a left module (right algebra must be C^1): dimension of the
// idempotent cut-down e_i . M per left index.
std::vector<std::size_t> module_to_bundle(const HilbertBimodule& m);

// Componentwise (m1 (x)_B m2)_{ik} = sum_j M_{ij} (x) N_{jk}; inner tensor
// factors are ordered j-ascending, left coordinate outer.
HilbertBimodule tensor_product(const HilbertBimodule& m1, const HilbertBimodule& m2);

// Coordinate permutation realizing ((x (x) y) (x) z) ~ (x (x) (y (x) z)) on
// the component over (i, l); maps right-bracketing coordinates to
// left-bracketing coordinates.
ComplexMatrix associator_permutation(const HilbertBimodule& x, const HilbertBimodule& y,
                                     const HilbertBimodule& z, std::size_t i, std::size_t l);

} // namespace ncg
