#pragma once

// Finite-dimensional C*-algebras in canonical block form A = M_{n1} + ... +
// M_{nk} (direct sum), their states, homomorphisms, and the classical
// Gel'fand machinery at finite scale.

#include <cstddef>
#include <optional>
#include <vector>

#include "ncg/matrix.hpp"
#include "ncg/report.hpp"

namespace ncg {

class AlgebraElement;

class FiniteCStarAlgebra {
public:
    explicit FiniteCStarAlgebra(std::vector<std::size_t> block_dims);

    const std::vector<std::size_t>& block_dims() const { return dims_; }
    std::size_t block_count() const { return dims_.size(); }

    bool is_commutative() const;
    // Complex dimension sum n_i^2; equals the real dimension of the
    // self-adjoint part.
    std::size_t dim() const;

    bool operator==(const FiniteCStarAlgebra& o) const { return dims_ == o.dims_; }
    bool operator!=(const FiniteCStarAlgebra& o) const { return !(*this == o); }

    AlgebraElement unit() const;
    AlgebraElement zero() const;
    // Minimal central idempotent of block i (identity of the i-th block).
    AlgebraElement block_idempotent(std::size_t i) const;
    // Matrix-unit basis of the whole algebra, ordered block by block,
    // row-major inside each block. Spans A, so homomorphism and validator
    // checks run over exactly this list.
    std::vector<AlgebraElement> matrix_unit_basis() const;
    // Self-adjoint real basis: per block the diagonal units, then
    // (E_pq+E_qp) and i(E_pq-E_qp) for p<q.
    std::vector<AlgebraElement> selfadjoint_basis() const;

    // Coordinates <-> element, in matrix_unit_basis order.
    AlgebraElement from_coords(const std::vector<Complex>& coords) const;

private:
    std::vector<std::size_t> dims_;
};

class AlgebraElement {
public:
    AlgebraElement(FiniteCStarAlgebra algebra, std::vector<ComplexMatrix> blocks);

    const FiniteCStarAlgebra& algebra() const { return algebra_; }
    const std::vector<ComplexMatrix>& blocks() const { return blocks_; }
    ComplexMatrix& block(std::size_t i) { return blocks_[i]; }
    const ComplexMatrix& block(std::size_t i) const { return blocks_[i]; }

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement operator*(Complex s) const;
    AlgebraElement adjoint() const;

    // C*-norm: max over blocks of the operator norm.
    double norm() const;
    std::vector<Complex> coords() const;

    // For commutative algebras: the scalar at block i.
    Complex scalar(std::size_t i) const;

private:
    FiniteCStarAlgebra algebra_;
    std::vector<ComplexMatrix> blocks_;
};

// Coordinate-projection character of a commutative algebra.
class Character {
public:
    Character(FiniteCStarAlgebra algebra, std::size_t index);

    const FiniteCStarAlgebra& algebra() const { return algebra_; }
    std::size_t index() const { return index_; }
    Complex evaluate(const AlgebraElement& a) const;

private:
    FiniteCStarAlgebra algebra_;
    std::size_t index_;
};

// Vector state on one block: omega(a) = <xi, a_i xi>. The phase gauge is
// fixed by making the first nonzero component of xi real positive.
class PureState {
public:
    PureState(FiniteCStarAlgebra algebra, std::size_t block_index,
              std::vector<Complex> xi);

    static PureState from_character(const Character& c);

    const FiniteCStarAlgebra& algebra() const { return algebra_; }
    std::size_t block_index() const { return block_; }
    const std::vector<Complex>& vector() const { return xi_; }

    Complex evaluate(const AlgebraElement& a) const;

private:
    FiniteCStarAlgebra algebra_;
    std::size_t block_;
    std::vector<Complex> xi_;
};

// Unital *-homomorphism between finite C*-algebras. Commutative-to-
// commutative maps are index maps kappa (target block j reads source block
// kappa(j)); the general case is an explicit linear map on coordinates,
// verified on the matrix-unit spanning set.
class AlgebraHomomorphism {
public:
    static AlgebraHomomorphism from_index_map(FiniteCStarAlgebra source,
                                              FiniteCStarAlgebra target,
                                              std::vector<std::size_t> kappa);
    static AlgebraHomomorphism identity(const FiniteCStarAlgebra& a);
    // linear: dim(target) x dim(source) matrix over matrix-unit coordinates.
    static AlgebraHomomorphism from_linear_map(FiniteCStarAlgebra source,
                                               FiniteCStarAlgebra target,
                                               ComplexMatrix linear,
                                               double tol = kDefaultTol);

    const FiniteCStarAlgebra& source() const { return source_; }
    const FiniteCStarAlgebra& target() const { return target_; }
    const std::optional<std::vector<std::size_t>>& index_map() const { return kappa_; }
    const ComplexMatrix& linear() const { return linear_; }

    AlgebraElement apply(const AlgebraElement& a) const;

    AlgebraHomomorphism compose_after(const AlgebraHomomorphism& inner) const;

    // Worst residual of multiplicativity / involution / unitality over the
    // matrix-unit spanning set.
    double hom_residual() const;
    bool is_epi(double sv_tol = kDefaultTol) const;

private:
    AlgebraHomomorphism(FiniteCStarAlgebra s, FiniteCStarAlgebra t, ComplexMatrix lin,
                        std::optional<std::vector<std::size_t>> kappa);

    FiniteCStarAlgebra source_;
    FiniteCStarAlgebra target_;
    ComplexMatrix linear_;
    std::optional<std::vector<std::size_t>> kappa_;
};

// Sp(A) of a commutative algebra: exactly one coordinate character per
// block, ordered by block index. Throws DomainError naming the first
// non-scalar block otherwise.
std::vector<Character> spectrum(const FiniteCStarAlgebra& a);

// Pull-back Sp(target) -> Sp(source) of a homomorphism between commutative
// algebras, returned as an index map: character j of the target goes to
// character result[j] of the source.
std::vector<std::size_t> pullback_spectrum(const AlgebraHomomorphism& phi);

// Gel'fand transform: the value list (omega(a)) over spectrum order.
std::vector<Complex> gelfand_transform(const AlgebraElement& a);

// Executes the finite Gel'fand round trip on one commutative algebra:
// p -> ev_p is a bijection Sp(A) -> Sp(C(Sp(A))) and the transform is
// isometric. Residuals are exact zeros on finite data.
Report evaluation_homeomorphism_check(const FiniteCStarAlgebra& a);

} // namespace ncg
