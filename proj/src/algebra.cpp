#include "ncg/algebra.hpp"

#include <cmath>
#include <string>

namespace ncg {

FiniteCStarAlgebra::FiniteCStarAlgebra(std::vector<std::size_t> block_dims)
    : dims_(std::move(block_dims)) {
    if (dims_.empty()) throw DimensionError("algebra needs at least one block");
    for (auto n : dims_)
        if (n == 0) throw DimensionError("algebra block of dimension zero");
}

bool FiniteCStarAlgebra::is_commutative() const {
    for (auto n : dims_)
        if (n != 1) return false;
    return true;
}

std::size_t FiniteCStarAlgebra::dim() const {
    std::size_t d = 0;
    for (auto n : dims_) d += n * n;
    return d;
}

AlgebraElement FiniteCStarAlgebra::unit() const {
    std::vector<ComplexMatrix> blocks;
    for (auto n : dims_) blocks.push_back(ComplexMatrix::identity(n));
    return AlgebraElement(*this, std::move(blocks));
}

AlgebraElement FiniteCStarAlgebra::zero() const {
    std::vector<ComplexMatrix> blocks;
    for (auto n : dims_) blocks.push_back(ComplexMatrix::zero(n, n));
    return AlgebraElement(*this, std::move(blocks));
}

AlgebraElement FiniteCStarAlgebra::block_idempotent(std::size_t i) const {
    auto e = zero();
    e.block(i) = ComplexMatrix::identity(dims_[i]);
    return e;
}

std::vector<AlgebraElement> FiniteCStarAlgebra::matrix_unit_basis() const {
    std::vector<AlgebraElement> basis;
    for (std::size_t b = 0; b < dims_.size(); ++b) {
        const std::size_t n = dims_[b];
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                auto e = zero();
                e.block(b)(p, q) = 1.0;
                basis.push_back(std::move(e));
            }
    }
    return basis;
}

std::vector<AlgebraElement> FiniteCStarAlgebra::selfadjoint_basis() const {
    std::vector<AlgebraElement> basis;
    for (std::size_t b = 0; b < dims_.size(); ++b) {
        const std::size_t n = dims_[b];
        for (std::size_t p = 0; p < n; ++p) {
            auto e = zero();
            e.block(b)(p, p) = 1.0;
            basis.push_back(std::move(e));
        }
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                auto e = zero();
                e.block(b)(p, q) = 1.0;
                e.block(b)(q, p) = 1.0;
                basis.push_back(std::move(e));
                auto f = zero();
                f.block(b)(p, q) = Complex(0.0, 1.0);
                f.block(b)(q, p) = Complex(0.0, -1.0);
                basis.push_back(std::move(f));
            }
    }
    return basis;
}

AlgebraElement FiniteCStarAlgebra::from_coords(const std::vector<Complex>& coords) const {
    if (coords.size() != dim()) throw DimensionError("coordinate count mismatch");
    auto e = zero();
    std::size_t k = 0;
    for (std::size_t b = 0; b < dims_.size(); ++b) {
        const std::size_t n = dims_[b];
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) e.block(b)(p, q) = coords[k++];
    }
    return e;
}

AlgebraElement::AlgebraElement(FiniteCStarAlgebra algebra, std::vector<ComplexMatrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
    if (blocks_.size() != algebra_.block_count())
        throw DimensionError("element block count mismatch");
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (blocks_[i].rows() != algebra_.block_dims()[i] || !blocks_[i].square())
            throw DimensionError("element block shape mismatch at block " + std::to_string(i));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    if (algebra_ != o.algebra_) throw DomainError("element addition across algebras");
    std::vector<ComplexMatrix> blocks;
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks.push_back(blocks_[i] + o.blocks_[i]);
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
    return *this + o * Complex(-1.0, 0.0);
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    if (algebra_ != o.algebra_) throw DomainError("element product across algebras");
    std::vector<ComplexMatrix> blocks;
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks.push_back(blocks_[i] * o.blocks_[i]);
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(Complex s) const {
    std::vector<ComplexMatrix> blocks;
    for (const auto& b : blocks_) blocks.push_back(b * s);
    return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::adjoint() const {
    std::vector<ComplexMatrix> blocks;
    for (const auto& b : blocks_) blocks.push_back(b.adjoint());
    return AlgebraElement(algebra_, std::move(blocks));
}

double AlgebraElement::norm() const {
    double n = 0.0;
    for (const auto& b : blocks_) n = std::max(n, operator_norm(b));
    return n;
}

std::vector<Complex> AlgebraElement::coords() const {
    std::vector<Complex> c;
    c.reserve(algebra_.dim());
    for (const auto& b : blocks_)
        for (const auto& z : b.entries()) c.push_back(z);
    return c;
}

Complex AlgebraElement::scalar(std::size_t i) const {
    if (algebra_.block_dims()[i] != 1)
        throw DomainError("scalar() on non-scalar block " + std::to_string(i));
    return blocks_[i](0, 0);
}

Character::Character(FiniteCStarAlgebra algebra, std::size_t index)
    : algebra_(std::move(algebra)), index_(index) {
    if (!algebra_.is_commutative())
        throw DomainError("character of a non-commutative algebra");
    if (index_ >= algebra_.block_count()) throw DimensionError("character index out of range");
}

Complex Character::evaluate(const AlgebraElement& a) const {
    if (a.algebra() != algebra_) throw DomainError("character applied across algebras");
    return a.block(index_)(0, 0);
}

PureState::PureState(FiniteCStarAlgebra algebra, std::size_t block_index,
                     std::vector<Complex> xi)
    : algebra_(std::move(algebra)), block_(block_index), xi_(std::move(xi)) {
    if (block_ >= algebra_.block_count()) throw DimensionError("state block out of range");
    if (xi_.size() != algebra_.block_dims()[block_])
        throw DimensionError("state vector length mismatch");
    double n2 = 0.0;
    for (const auto& z : xi_) n2 += std::norm(z);
    if (n2 <= 0.0) throw ContractViolation("state vector is zero");
    const double n = std::sqrt(n2);
    // Normalize and quotient the phase: first nonzero component real positive.
    Complex rot(1.0, 0.0);
    for (const auto& z : xi_) {
        if (std::abs(z) > 1e-12 * n) {
            rot = std::conj(z / std::abs(z));
            break;
        }
    }
    for (auto& z : xi_) z = z * rot / n;
}

PureState PureState::from_character(const Character& c) {
    return PureState(c.algebra(), c.index(), {Complex(1.0, 0.0)});
}

Complex PureState::evaluate(const AlgebraElement& a) const {
    if (a.algebra() != algebra_) throw DomainError("state applied across algebras");
    const auto& m = a.block(block_);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < xi_.size(); ++i)
        for (std::size_t j = 0; j < xi_.size(); ++j)
            acc += std::conj(xi_[i]) * m(i, j) * xi_[j];
    return acc;
}

AlgebraHomomorphism::AlgebraHomomorphism(FiniteCStarAlgebra s, FiniteCStarAlgebra t,
                                         ComplexMatrix lin,
                                         std::optional<std::vector<std::size_t>> kappa)
    : source_(std::move(s)), target_(std::move(t)), linear_(std::move(lin)),
      kappa_(std::move(kappa)) {}

AlgebraHomomorphism AlgebraHomomorphism::from_index_map(FiniteCStarAlgebra source,
                                                        FiniteCStarAlgebra target,
                                                        std::vector<std::size_t> kappa) {
    if (!source.is_commutative() || !target.is_commutative())
        throw DomainError("index-map homomorphism requires commutative algebras");
    if (kappa.size() != target.block_count())
        throw DimensionError("index map length must equal target block count");
    for (auto k : kappa)
        if (k >= source.block_count()) throw DimensionError("index map entry out of range");
    ComplexMatrix lin(target.dim(), source.dim());
    for (std::size_t j = 0; j < kappa.size(); ++j) lin(j, kappa[j]) = 1.0;
    return AlgebraHomomorphism(std::move(source), std::move(target), std::move(lin),
                               std::move(kappa));
}

AlgebraHomomorphism AlgebraHomomorphism::identity(const FiniteCStarAlgebra& a) {
    if (a.is_commutative()) {
        std::vector<std::size_t> kappa(a.block_count());
        for (std::size_t i = 0; i < kappa.size(); ++i) kappa[i] = i;
        return from_index_map(a, a, std::move(kappa));
    }
    return AlgebraHomomorphism(a, a, ComplexMatrix::identity(a.dim()), std::nullopt);
}

AlgebraHomomorphism AlgebraHomomorphism::from_linear_map(FiniteCStarAlgebra source,
                                                         FiniteCStarAlgebra target,
                                                         ComplexMatrix linear, double tol) {
    if (linear.rows() != target.dim() || linear.cols() != source.dim())
        throw DimensionError("homomorphism matrix shape mismatch");
    AlgebraHomomorphism phi(std::move(source), std::move(target), std::move(linear),
                            std::nullopt);
    const double res = phi.hom_residual();
    if (res > tol)
        throw ContractViolation("map is not a unital *-homomorphism, residual " +
                                std::to_string(res));
    return phi;
}

AlgebraElement AlgebraHomomorphism::apply(const AlgebraElement& a) const {
    if (a.algebra() != source_) throw DomainError("homomorphism applied across algebras");
    const auto coords = a.coords();
    const auto out = linear_ * ComplexMatrix::column(coords);
    return target_.from_coords(out.vec());
}

AlgebraHomomorphism AlgebraHomomorphism::compose_after(const AlgebraHomomorphism& inner) const {
    if (inner.target_ != source_)
        throw DimensionError("homomorphism composition-order mismatch");
    std::optional<std::vector<std::size_t>> kappa;
    if (kappa_ && inner.kappa_) {
        std::vector<std::size_t> k(target_.block_count());
        for (std::size_t j = 0; j < k.size(); ++j) k[j] = (*inner.kappa_)[(*kappa_)[j]];
        kappa = std::move(k);
    }
    return AlgebraHomomorphism(inner.source_, target_, linear_ * inner.linear_,
                               std::move(kappa));
}

double AlgebraHomomorphism::hom_residual() const {
    const auto basis = source_.matrix_unit_basis();
    double worst = 0.0;
    std::vector<AlgebraElement> images;
    images.reserve(basis.size());
    for (const auto& e : basis) images.push_back(apply(e));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        // involution
        const auto lhs = apply(basis[i].adjoint());
        worst = std::max(worst, (lhs - images[i].adjoint()).norm());
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const auto prod = apply(basis[i] * basis[j]);
            worst = std::max(worst, (prod - images[i] * images[j]).norm());
        }
    }
    worst = std::max(worst, (apply(source_.unit()) - target_.unit()).norm());
    return worst;
}

bool AlgebraHomomorphism::is_epi(double sv_tol) const {
    return matrix_rank(linear_, sv_tol) == target_.dim();
}

std::vector<Character> spectrum(const FiniteCStarAlgebra& a) {
    for (std::size_t i = 0; i < a.block_count(); ++i)
        if (a.block_dims()[i] != 1)
            throw DomainError("spectrum of non-commutative algebra: block " +
                              std::to_string(i) + " has dimension " +
                              std::to_string(a.block_dims()[i]));
    std::vector<Character> chars;
    for (std::size_t i = 0; i < a.block_count(); ++i) chars.emplace_back(a, i);
    return chars;
}

std::vector<std::size_t> pullback_spectrum(const AlgebraHomomorphism& phi) {
    const auto src_chars = spectrum(phi.source());
    const auto tgt_chars = spectrum(phi.target());
    std::vector<std::size_t> map(tgt_chars.size());
    for (std::size_t j = 0; j < tgt_chars.size(); ++j) {
        // omega_j . phi is a character of the source; identify it by its
        // value on the minimal idempotents.
        bool found = false;
        for (std::size_t i = 0; i < src_chars.size(); ++i) {
            const Complex v = tgt_chars[j].evaluate(phi.apply(phi.source().block_idempotent(i)));
            if (std::abs(v - Complex(1.0, 0.0)) < 1e-9) {
                map[j] = i;
                found = true;
                break;
            }
        }
        if (!found)
            throw ContractViolation("pullback: target character " + std::to_string(j) +
                                    " does not restrict to a source character");
    }
    return map;
}

std::vector<Complex> gelfand_transform(const AlgebraElement& a) {
    const auto chars = spectrum(a.algebra());
    std::vector<Complex> values;
    values.reserve(chars.size());
    for (const auto& c : chars) values.push_back(c.evaluate(a));
    return values;
}

Report evaluation_homeomorphism_check(const FiniteCStarAlgebra& a) {
    Report rep;
    rep.subject = "gelfand-round-trip";
    const auto chars = spectrum(a);
    const std::size_t n = chars.size();

    // C(Sp(A)) at finite scale is again C^n; ev_p sends point p to the
    // p-th coordinate character. Bijectivity amounts to ev being a
    // permutation (here the identity) of {0..n-1}.
    std::vector<bool> hit(n, false);
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        // ev_p evaluated on the Gel'fand transforms of the idempotents
        // singles out exactly one character of C(Sp(A)).
        std::size_t image = n;
        for (std::size_t q = 0; q < n; ++q) {
            const auto values = gelfand_transform(a.block_idempotent(q));
            // hat(e_q)(p) = delta_{pq}
            const double res = std::abs(values[p] - (p == q ? 1.0 : 0.0));
            worst = std::max(worst, res);
            if (std::abs(values[p] - Complex(1.0, 0.0)) < 0.5) image = q;
        }
        if (image < n) hit[image] = true;
    }
    const bool bijective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    rep.add("evaluation-bijective", bijective ? CheckStatus::Pass : CheckStatus::Fail, worst);

    // Isometry of the transform on the matrix-unit basis and a few sums.
    double iso = 0.0;
    for (const auto& e : a.matrix_unit_basis()) {
        const auto vals = gelfand_transform(e);
        double sup = 0.0;
        for (const auto& v : vals) sup = std::max(sup, std::abs(v));
        iso = std::max(iso, std::abs(sup - e.norm()));
    }
    rep.add_residual("transform-isometric", iso, 1e-12);
    return rep;
}

} // namespace ncg
