#include "ncg/triple.hpp"

#include <cmath>
#include <string>

namespace ncg {

namespace {

const char* sign_name(int s) { return s > 0 ? "+" : "-"; }

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix pauli_y() {
    return ComplexMatrix::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
}
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
ComplexMatrix omega2() { return ComplexMatrix::from_rows({{0.0, -1.0}, {1.0, 0.0}}); }

} // namespace

Representation::Representation(FiniteCStarAlgebra algebra,
                               std::vector<std::size_t> multiplicities,
                               ComplexMatrix basis_change, double tol)
    : algebra_(std::move(algebra)), mults_(std::move(multiplicities)),
      u_(std::move(basis_change)) {
    if (mults_.size() != algebra_.block_count())
        throw DimensionError("one multiplicity per block required");
    for (std::size_t i = 0; i < mults_.size(); ++i)
        dim_ += algebra_.block_dims()[i] * mults_[i];
    if (dim_ == 0) throw DimensionError("representation on the zero space");
    if (u_.rows() != dim_ || u_.cols() != dim_)
        throw DimensionError("basis change has wrong size for the representation space");
    const double res = unitarity_residual(u_);
    if (res > tol)
        throw ContractViolation("basis change is not unitary, residual " +
                                std::to_string(res));
}

Representation Representation::standard(const FiniteCStarAlgebra& algebra) {
    std::vector<std::size_t> mults(algebra.block_count(), 1);
    std::size_t d = 0;
    for (auto n : algebra.block_dims()) d += n;
    return Representation(algebra, mults, ComplexMatrix::identity(d));
}

bool Representation::faithful() const {
    for (auto m : mults_)
        if (m == 0) return false;
    return true;
}

ComplexMatrix Representation::pi(const AlgebraElement& a) const {
    if (a.algebra() != algebra_) throw DomainError("pi applied across algebras");
    ComplexMatrix inner(dim_, dim_);
    std::size_t offset = 0;
    for (std::size_t b = 0; b < mults_.size(); ++b) {
        if (mults_[b] == 0) continue;
        const auto blk = kron(a.block(b), ComplexMatrix::identity(mults_[b]));
        inner.set_block(offset, offset, blk);
        offset += algebra_.block_dims()[b] * mults_[b];
    }
    return u_ * inner * u_.adjoint();
}

std::vector<ComplexMatrix> Representation::generator_images() const {
    std::vector<ComplexMatrix> out;
    for (const auto& g : algebra_.matrix_unit_basis()) out.push_back(pi(g));
    return out;
}

double Representation::hom_residual() const {
    const auto basis = algebra_.matrix_unit_basis();
    std::vector<ComplexMatrix> images;
    for (const auto& g : basis) images.push_back(pi(g));
    double worst = max_abs_diff(pi(algebra_.unit()), ComplexMatrix::identity(dim_));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        worst = std::max(worst, max_abs_diff(pi(basis[i].adjoint()), images[i].adjoint()));
        for (std::size_t j = 0; j < basis.size(); ++j)
            worst = std::max(worst,
                             max_abs_diff(pi(basis[i] * basis[j]), images[i] * images[j]));
    }
    return worst;
}

KOSigns ko_signs(int n) {
    const int m = ((n % 8) + 8) % 8;
    static constexpr int eps[8] = {+1, +1, -1, -1, -1, -1, +1, +1};
    static constexpr int eps_prime[8] = {+1, -1, +1, +1, +1, -1, +1, +1};
    static constexpr int eps_second[8] = {+1, 0, -1, 0, +1, 0, -1, 0};
    return {eps[m], eps_prime[m], eps_second[m]};
}

SpectralTriple::SpectralTriple(Representation rep, ComplexMatrix dirac,
                               std::optional<ComplexMatrix> grading,
                               std::optional<AntiunitaryOperator> real_structure,
                               std::optional<int> ko_dimension, double tol)
    : rep_(std::move(rep)), dirac_(std::move(dirac)), grading_(std::move(grading)),
      j_(std::move(real_structure)), ko_(ko_dimension) {
    if (dirac_.rows() != rep_.dim() || !dirac_.square())
        throw DimensionError("Dirac operator size mismatch");
    const double herm = hermitian_residual(dirac_);
    if (herm > tol * (1.0 + dirac_.max_abs()))
        throw ContractViolation("Dirac operator is not Hermitian, residual " +
                                std::to_string(herm));
    if (grading_ && (grading_->rows() != rep_.dim() || !grading_->square()))
        throw DimensionError("grading size mismatch");
    if (j_ && j_->dim() != rep_.dim()) throw DimensionError("real structure size mismatch");
}

ComplexMatrix SpectralTriple::opposite(const AlgebraElement& b) const {
    if (!j_) throw PreconditionError("opposite action needs a real structure");
    return j_->sandwich(pi(b.adjoint()));
}

SpectralTriple SpectralTriple::with_dirac(ComplexMatrix d) const {
    return SpectralTriple(rep_, std::move(d), grading_, j_, ko_);
}

SpectralTriple SpectralTriple::conjugated(const ComplexMatrix& w) const {
    if (w.rows() != dim() || unitarity_residual(w) > 1e-8)
        throw ContractViolation("conjugation requires a unitary of matching size");
    Representation rep(rep_.algebra(), rep_.multiplicities(), w * rep_.basis_change());
    auto d = w * dirac_ * w.adjoint();
    std::optional<ComplexMatrix> g;
    if (grading_) g = w * (*grading_) * w.adjoint();
    std::optional<AntiunitaryOperator> j;
    if (j_) j = AntiunitaryOperator(w * j_->unitary_part() * w.transpose());
    return SpectralTriple(std::move(rep), std::move(d), std::move(g), std::move(j), ko_);
}

SpectralTriple canonical_real_triple(int ko) {
    const int n = ((ko % 8) + 8) % 8;
    const FiniteCStarAlgebra scalars({1});
    auto rep_on = [&](std::size_t d) {
        return Representation(scalars, {d}, ComplexMatrix::identity(d));
    };
    const auto sx = pauli_x();
    const auto sy = pauli_y();
    const auto sz = pauli_z();
    const auto om = omega2();
    const auto i2 = ComplexMatrix::identity(2);
    switch (n) {
    case 0:
        return SpectralTriple(rep_on(2), sx, sz, AntiunitaryOperator(i2), 0);
    case 1:
        return SpectralTriple(rep_on(2), sy, std::nullopt, AntiunitaryOperator(i2), 1);
    case 2:
        return SpectralTriple(rep_on(4), kron(sy, sy), kron(sz, i2),
                              AntiunitaryOperator(kron(om, i2)), 2);
    case 3:
        return SpectralTriple(rep_on(4), kron(sy, sy), std::nullopt,
                              AntiunitaryOperator(kron(om, i2)), 3);
    case 4:
        return SpectralTriple(rep_on(4), kron(i2, sx), kron(i2, sz),
                              AntiunitaryOperator(kron(om, i2)), 4);
    case 5:
        return SpectralTriple(rep_on(2), sz, std::nullopt, AntiunitaryOperator(om), 5);
    case 6:
        return SpectralTriple(rep_on(2), sx, sy, AntiunitaryOperator(i2), 6);
    default:
        return SpectralTriple(rep_on(1), ComplexMatrix::identity(1), std::nullopt,
                              AntiunitaryOperator(ComplexMatrix::identity(1)), 7);
    }
}

SpectralTriple two_point_triple(Complex lambda, bool with_grading) {
    const FiniteCStarAlgebra c2({1, 1});
    auto rep = Representation::standard(c2);
    ComplexMatrix d(2, 2);
    d(0, 1) = std::conj(lambda);
    d(1, 0) = lambda;
    std::optional<ComplexMatrix> g;
    if (with_grading) g = pauli_z();
    return SpectralTriple(std::move(rep), std::move(d), std::move(g));
}

Report validate_even(const SpectralTriple& t, double tol) {
    if (!t.grading()) throw PreconditionError("validate_even: no grading supplied");
    const auto& g = *t.grading();
    Report rep;
    rep.subject = "even";
    rep.add_residual("grading-hermitian", hermitian_residual(g), tol);
    rep.add_residual("grading-involution",
                     max_abs_diff(g * g, ComplexMatrix::identity(g.rows())), tol);
    double comm = 0.0;
    for (const auto& pg : t.rep().generator_images())
        comm = std::max(comm, commutator(g, pg).max_abs());
    rep.add_residual("grading-commutes-algebra", comm, tol);
    rep.add_residual("grading-anticommutes-dirac",
                     operator_norm(anticommutator(g, t.dirac())), tol);
    return rep;
}

Report validate_real(const SpectralTriple& t, double tol) {
    if (!t.real_structure()) throw PreconditionError("validate_real: no real structure");
    if (!t.ko_dimension()) throw PreconditionError("validate_real: no KO-dimension label");
    const int n = ((*t.ko_dimension() % 8) + 8) % 8;
    const bool even_label = (n % 2) == 0;
    if (even_label && !t.grading())
        throw PreconditionError("validate_real: even KO-dimension but no grading");
    const auto signs = ko_signs(n);
    const auto& j = *t.real_structure();

    Report rep;
    rep.subject = "real";

    const auto gens = t.algebra().matrix_unit_basis();
    double zeroth = 0.0, first = 0.0;
    for (const auto& a : gens) {
        const auto pa = t.pi(a);
        const auto da = commutator(t.dirac(), pa);
        for (const auto& b : gens) {
            const auto opp = t.opposite(b);
            zeroth = std::max(zeroth, commutator(pa, opp).max_abs());
            first = std::max(first, commutator(da, opp).max_abs());
        }
    }
    rep.add_residual("zeroth-order", zeroth, tol);
    rep.add_residual("first-order", first, tol);

    // Sign checks report the residual of the required relation and name the
    // sign actually observed.
    auto sign_entry = [&](const std::string& name, const ComplexMatrix& plus_defect,
                          const ComplexMatrix& minus_defect, int required) {
        const double rp = plus_defect.max_abs();
        const double rm = minus_defect.max_abs();
        const double res = required > 0 ? rp : rm;
        const char* found = (rp <= rm) ? "+" : "-";
        if (rp <= tol && rm <= tol) found = sign_name(required);
        rep.add(name, res <= tol ? CheckStatus::Pass : CheckStatus::Fail, res,
                std::string("required ") + sign_name(required) + ", found " + found);
    };

    const auto j2 = j.squared();
    const auto id = ComplexMatrix::identity(j2.rows());
    sign_entry("J-squared", j2 - id, j2 + id, signs.eps);
    sign_entry("J-dirac", j.commute_defect(t.dirac()), j.anticommute_defect(t.dirac()),
               signs.eps_prime);
    if (even_label) {
        sign_entry("J-grading", j.commute_defect(*t.grading()),
                   j.anticommute_defect(*t.grading()), signs.eps_second);
    } else if (t.grading()) {
        rep.add("ko-parity", CheckStatus::Fail, 1.0,
                "grading present but the KO-dimension label is odd");
    }
    return rep;
}

double FormSpace::projection_residual(const ComplexMatrix& m) const {
    if (basis.empty()) return m.frobenius_norm();
    ComplexMatrix proj(m.rows(), m.cols());
    for (const auto& b : basis) {
        Complex ip = 0.0;
        for (std::size_t k = 0; k < b.entries().size(); ++k)
            ip += std::conj(b.entries()[k]) * m.entries()[k];
        proj = proj + b * ip;
    }
    return (m - proj).frobenius_norm();
}

bool FormSpace::contains(const ComplexMatrix& m, double tol) const {
    return projection_residual(m) <= tol * (1.0 + m.frobenius_norm());
}

namespace {

std::vector<ComplexMatrix> orthonormal_matrix_span(const std::vector<ComplexMatrix>& ms,
                                                   double sv_tol) {
    if (ms.empty()) return {};
    std::vector<std::vector<Complex>> cols;
    for (const auto& m : ms) cols.push_back(m.vec());
    const auto basis_cols = column_space(from_columns(cols), sv_tol);
    std::vector<ComplexMatrix> out;
    for (std::size_t k = 0; k < basis_cols.cols(); ++k) {
        ComplexMatrix b(ms.front().rows(), ms.front().cols());
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                b(i, j) = basis_cols(i * b.cols() + j, k);
        out.push_back(std::move(b));
    }
    return out;
}

} // namespace

FormSpace omega_forms(const SpectralTriple& t, std::size_t degree) {
    const auto gens = t.rep().generator_images();
    std::vector<ComplexMatrix> commutators;
    for (const auto& g : gens) commutators.push_back(commutator(t.dirac(), g));

    // Degree-k pure products are (degree k-1 products) * [D, pi(g)]; the
    // span over all tuples factorizes through the spans level by level.
    std::vector<ComplexMatrix> cumulative = gens;
    std::vector<ComplexMatrix> level = orthonormal_matrix_span(gens, 1e-8);
    for (std::size_t k = 1; k <= degree; ++k) {
        std::vector<ComplexMatrix> next;
        for (const auto& b : level)
            for (const auto& c : commutators) next.push_back(b * c);
        level = orthonormal_matrix_span(next, 1e-8);
        for (const auto& b : level) cumulative.push_back(b);
    }
    FormSpace fs;
    fs.degree = degree;
    fs.basis = orthonormal_matrix_span(cumulative, 1e-8);
    return fs;
}

HochschildChain HochschildChain::unit_chain(const FiniteCStarAlgebra& a) {
    return HochschildChain{0, {ChainTerm{Complex(1.0, 0.0), {a.unit()}}}};
}

ComplexMatrix evaluate_chain(const SpectralTriple& t, const HochschildChain& c) {
    ComplexMatrix acc(t.dim(), t.dim());
    for (const auto& term : c.terms) {
        if (term.factors.size() != c.degree + 1)
            throw DimensionError("chain term arity does not match the degree");
        for (const auto& f : term.factors)
            if (f.algebra() != t.algebra())
                throw DomainError("chain factor from a different algebra");
        ComplexMatrix prod = t.pi(term.factors[0]);
        for (std::size_t i = 1; i < term.factors.size(); ++i)
            prod = prod * commutator(t.dirac(), t.pi(term.factors[i]));
        acc = acc + prod * term.coeff;
    }
    return acc;
}

HochschildChain hochschild_boundary(const HochschildChain& c) {
    HochschildChain out;
    out.degree = c.degree == 0 ? 0 : c.degree - 1;
    if (c.degree == 0) return out; // boundary of a 0-chain vanishes
    for (const auto& term : c.terms) {
        const auto& f = term.factors;
        const std::size_t n = c.degree;
        for (std::size_t i = 0; i + 1 <= n; ++i) {
            ChainTerm t2;
            t2.coeff = term.coeff * Complex(i % 2 == 0 ? 1.0 : -1.0, 0.0);
            for (std::size_t k = 0; k < f.size(); ++k) {
                if (k == i) {
                    t2.factors.push_back(f[i] * f[i + 1]);
                    ++k; // skip i+1
                } else {
                    t2.factors.push_back(f[k]);
                }
            }
            out.terms.push_back(std::move(t2));
        }
        ChainTerm last;
        last.coeff = term.coeff * Complex(n % 2 == 0 ? 1.0 : -1.0, 0.0);
        last.factors.push_back(f[n] * f[0]);
        for (std::size_t k = 1; k + 1 <= n; ++k) last.factors.push_back(f[k]);
        out.terms.push_back(std::move(last));
    }
    return out;
}

std::vector<Complex> chain_tensor_coords(const HochschildChain& c) {
    if (c.terms.empty()) return {};
    const std::size_t adim = c.terms.front().factors.front().algebra().dim();
    std::size_t total = 1;
    for (std::size_t i = 0; i <= c.degree; ++i) total *= adim;
    std::vector<Complex> coords(total, Complex(0.0, 0.0));
    for (const auto& term : c.terms) {
        std::vector<Complex> acc{term.coeff};
        for (const auto& f : term.factors) {
            const auto fc = f.coords();
            std::vector<Complex> next(acc.size() * fc.size());
            for (std::size_t a = 0; a < acc.size(); ++a)
                for (std::size_t b = 0; b < fc.size(); ++b)
                    next[a * fc.size() + b] = acc[a] * fc[b];
            acc = std::move(next);
        }
        for (std::size_t k = 0; k < total; ++k) coords[k] += acc[k];
    }
    return coords;
}

namespace {

ComplexMatrix orientation_target(const SpectralTriple& t) {
    return t.grading() ? *t.grading() : ComplexMatrix::identity(t.dim());
}

double chain_boundary_norm(const HochschildChain& c) {
    if (c.degree == 0) return 0.0;
    const auto coords = chain_tensor_coords(hochschild_boundary(c));
    double s = 0.0;
    for (const auto& z : coords) s += std::norm(z);
    return std::sqrt(s);
}

} // namespace

Report validate_orientability(const SpectralTriple& t, const HochschildChain& c,
                              double tol) {
    Report rep;
    rep.subject = "orientability";
    rep.add_residual("cycle-boundary", chain_boundary_norm(c), tol);
    const auto target = orientation_target(t);
    rep.add_residual("orientation-match", operator_norm(evaluate_chain(t, c) - target), tol,
                     t.grading() ? "target is the grading" : "target is the identity");
    return rep;
}

std::optional<HochschildChain> find_orientation_cycle(const SpectralTriple& t,
                                                      std::size_t degree,
                                                      double residual_cap) {
    const auto basis = t.algebra().matrix_unit_basis();
    const std::size_t g = basis.size();
    std::size_t tuple_count = 1;
    for (std::size_t i = 0; i <= degree; ++i) {
        tuple_count *= g;
        if (tuple_count > 20000)
            throw RefusalError("orientation search space too large at degree " +
                               std::to_string(degree));
    }

    const auto target = orientation_target(t);
    const std::size_t d2 = t.dim() * t.dim();
    std::size_t bnd_dim = 1;
    if (degree >= 1)
        for (std::size_t i = 0; i < degree; ++i) bnd_dim *= g;

    ComplexMatrix system(d2 + (degree >= 1 ? bnd_dim : 0), tuple_count);
    ComplexMatrix rhs(system.rows(), 1);
    {
        const auto tv = target.vec();
        for (std::size_t i = 0; i < d2; ++i) rhs(i, 0) = tv[i];
    }

    std::vector<std::size_t> idx(degree + 1, 0);
    for (std::size_t col = 0; col < tuple_count; ++col) {
        std::size_t rem = col;
        for (std::size_t k = degree + 1; k-- > 0;) {
            idx[k] = rem % g;
            rem /= g;
        }
        HochschildChain single;
        single.degree = degree;
        ChainTerm term;
        term.coeff = 1.0;
        for (std::size_t k = 0; k <= degree; ++k) term.factors.push_back(basis[idx[k]]);
        single.terms.push_back(term);
        const auto mat = evaluate_chain(t, single);
        const auto mv = mat.vec();
        for (std::size_t i = 0; i < d2; ++i) system(i, col) = mv[i];
        if (degree >= 1) {
            const auto bc = chain_tensor_coords(hochschild_boundary(single));
            for (std::size_t i = 0; i < bnd_dim; ++i) system(d2 + i, col) = bc[i];
        }
    }

    const auto sol = least_squares(system, rhs);
    const double res = (system * sol - rhs).frobenius_norm();
    if (res > residual_cap) return std::nullopt;

    HochschildChain chain;
    chain.degree = degree;
    for (std::size_t col = 0; col < tuple_count; ++col) {
        const Complex coeff = sol(col, 0);
        if (std::abs(coeff) < 1e-12) continue;
        std::size_t rem = col;
        std::vector<std::size_t> tix(degree + 1);
        for (std::size_t k = degree + 1; k-- > 0;) {
            tix[k] = rem % g;
            rem /= g;
        }
        ChainTerm term;
        term.coeff = coeff;
        for (std::size_t k = 0; k <= degree; ++k) term.factors.push_back(basis[tix[k]]);
        chain.terms.push_back(std::move(term));
    }
    if (chain.terms.empty()) {
        ChainTerm term;
        term.coeff = 0.0;
        for (std::size_t k = 0; k <= degree; ++k) term.factors.push_back(basis[0]);
        chain.terms.push_back(std::move(term));
    }
    return chain;
}

namespace {

// Append the realified rows of a complex-linear map on vec(X):
// [[Re, -Im], [Im, Re]] acting on (Re x, Im x).
void append_realified(std::vector<std::vector<Complex>>& rows, const ComplexMatrix& l) {
    const std::size_t d2 = l.cols();
    for (std::size_t i = 0; i < l.rows(); ++i) {
        std::vector<Complex> r1(2 * d2), r2(2 * d2);
        for (std::size_t j = 0; j < d2; ++j) {
            r1[j] = l(i, j).real();
            r1[d2 + j] = -l(i, j).imag();
            r2[j] = l(i, j).imag();
            r2[d2 + j] = l(i, j).real();
        }
        rows.push_back(std::move(r1));
        rows.push_back(std::move(r2));
    }
}

// vec(XM - MX) = (I (x) M^T - M (x) I) vec X for row-major vec.
ComplexMatrix commutation_map(const ComplexMatrix& m) {
    const std::size_t d = m.rows();
    return kron(ComplexMatrix::identity(d), m.transpose()) -
           kron(m, ComplexMatrix::identity(d));
}

} // namespace

bool is_irreducible(const SpectralTriple& t) {
    const std::size_t d = t.dim();
    const std::size_t d2 = d * d;
    std::vector<std::vector<Complex>> rows;

    for (const auto& g : t.rep().generator_images())
        append_realified(rows, commutation_map(g));
    append_realified(rows, commutation_map(t.dirac()));
    if (t.grading()) append_realified(rows, commutation_map(*t.grading()));

    if (t.real_structure()) {
        // XJ = JX reads conj(X) = U^H X U; an R-linear condition tying the
        // real and imaginary parts of X together.
        const auto& u = t.real_structure()->unitary_part();
        const auto s = kron(u.adjoint(), u.transpose()); // vec(U^H X U)
        for (std::size_t i = 0; i < d2; ++i) {
            std::vector<Complex> r1(2 * d2), r2(2 * d2);
            for (std::size_t j = 0; j < d2; ++j) {
                r1[j] = s(i, j).real() - (i == j ? 1.0 : 0.0);
                r1[d2 + j] = -s(i, j).imag();
                r2[j] = s(i, j).imag();
                r2[d2 + j] = s(i, j).real() + (i == j ? 1.0 : 0.0);
            }
            rows.push_back(std::move(r1));
            rows.push_back(std::move(r2));
        }
    }

    std::vector<std::vector<Complex>> cols(2 * d2, std::vector<Complex>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < 2 * d2; ++c) cols[c][r] = rows[r][c];
    const auto system = from_columns(cols);
    const double scale = std::max(1.0, operator_norm(system));
    const auto kernel = null_space(system, 1e-8 * scale);
    const std::size_t expected = t.real_structure() ? 1 : 2;
    return kernel.cols() == expected;
}

Report axiom_report(const SpectralTriple& t, double tol) {
    Report rep;
    rep.subject = "spectral-triple";
    rep.add_residual("representation-star-homomorphism", t.rep().hom_residual(), tol);
    rep.add_residual("dirac-selfadjoint", hermitian_residual(t.dirac()), tol);
    rep.add("compact-resolvent", CheckStatus::Trivial, 0.0, "finite dimension");
    rep.add("bounded-commutators", CheckStatus::Trivial, 0.0, "finite dimension");
    rep.add("theta-summable", CheckStatus::Trivial, 0.0, "finite dimension");
    rep.add("finite", CheckStatus::Trivial, 0.0,
            "H is a finite projective bimodule at finite dimension");
    rep.add("dixmier-dimensionality", CheckStatus::NotApplicable, 0.0,
            "not applicable (finite dimension)");
    rep.add("regularity", CheckStatus::NotApplicable, 0.0,
            "not applicable (finite dimension)");

    if (t.grading()) {
        rep.merge(validate_even(t, tol), "even/");
    } else {
        rep.add("even/grading", CheckStatus::NotSupplied, 0.0, "no grading supplied");
    }

    if (t.real_structure() && t.ko_dimension()) {
        const bool even_label = ((*t.ko_dimension() % 8) + 8) % 8 % 2 == 0;
        if (even_label && !t.grading()) {
            rep.add("real/precondition", CheckStatus::Fail, 1.0,
                    "even KO-dimension label but no grading supplied");
        } else {
            rep.merge(validate_real(t, tol), "real/");
        }
    } else if (t.real_structure()) {
        rep.add("real/ko-dimension", CheckStatus::Fail, 1.0,
                "real structure present but no KO-dimension label");
    } else {
        rep.add("real/structure", CheckStatus::NotSupplied, 0.0,
                "no real structure supplied");
    }

    // Classification entries (properties, not validity axioms).
    bool oriented = false;
    std::string where;
    for (std::size_t deg = 0; deg <= 2 && !oriented; ++deg) {
        try {
            const auto c = find_orientation_cycle(t, deg);
            if (c) {
                const auto check = validate_orientability(t, *c, std::max(tol, 1e-6));
                if (check.passed()) {
                    oriented = true;
                    where = "cycle found at degree " + std::to_string(deg);
                }
            }
        } catch (const RefusalError&) {
            break;
        }
    }
    rep.add("orientable", oriented ? CheckStatus::Pass : CheckStatus::Fail,
            oriented ? 0.0 : 1.0,
            oriented ? where : "no Hochschild cycle up to degree 2 matches the orientation");
    const bool irr = is_irreducible(t);
    rep.add("irreducible", irr ? CheckStatus::Pass : CheckStatus::Fail, irr ? 0.0 : 1.0,
            "joint commutant rank test");
    return rep;
}

} // namespace ncg

namespace ncg {

namespace {

std::vector<ComplexMatrix> orthonormal_span_local(const std::vector<ComplexMatrix>& ms,
                                                  double sv_tol) {
    if (ms.empty()) return {};
    std::vector<std::vector<Complex>> cols;
    for (const auto& m : ms) cols.push_back(m.vec());
    const auto basis_cols = column_space(from_columns(cols), sv_tol);
    std::vector<ComplexMatrix> out;
    for (std::size_t k = 0; k < basis_cols.cols(); ++k) {
        ComplexMatrix b(ms.front().rows(), ms.front().cols());
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                b(i, j) = basis_cols(i * b.cols() + j, k);
        out.push_back(std::move(b));
    }
    return out;
}

double span_residual(const std::vector<ComplexMatrix>& basis, const ComplexMatrix& m) {
    ComplexMatrix proj(m.rows(), m.cols());
    for (const auto& b : basis) {
        Complex ip = 0.0;
        for (std::size_t k = 0; k < b.entries().size(); ++k)
            ip += std::conj(b.entries()[k]) * m.entries()[k];
        proj = proj + b * ip;
    }
    return (m - proj).frobenius_norm();
}

// Eigenvalue clusters of a Hermitian matrix, split at relative gaps.
std::vector<std::pair<std::size_t, std::size_t>> eig_clusters(
    const std::vector<double>& values, double scale) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t k = 1; k <= values.size(); ++k) {
        if (k == values.size() || values[k] - values[k - 1] > 1e-6 * scale) {
            out.emplace_back(start, k);
            start = k;
        }
    }
    return out;
}

ComplexMatrix isometry_from_eigcols(const EigResult& eig, std::size_t from,
                                    std::size_t to) {
    ComplexMatrix v(eig.vectors.rows(), to - from);
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t k = from; k < to; ++k) v(i, k - from) = eig.vectors(i, k);
    return v;
}

} // namespace

RecoveredStructure recover_block_structure(const std::vector<ComplexMatrix>& spanning,
                                           double tol) {
    if (spanning.empty()) throw DimensionError("structure recovery needs matrices");
    const std::size_t d = spanning.front().rows();
    for (const auto& m : spanning)
        if (!m.square() || m.rows() != d)
            throw DimensionError("structure recovery needs square matrices of equal size");

    // orthonormal basis of the span; enlarge by adjoints and the unit, then
    // demand that products stay inside (a *-closed unital algebra)
    std::vector<ComplexMatrix> gen = spanning;
    for (const auto& m : spanning) gen.push_back(m.adjoint());
    gen.push_back(ComplexMatrix::identity(d));
    auto basis = orthonormal_span_local(gen, 1e-10);
    {
        double closure = 0.0;
        for (const auto& m : spanning) closure = std::max(closure, span_residual(basis, m));
        for (const auto& x : basis)
            for (const auto& y : basis)
                closure = std::max(closure, span_residual(basis, x * y));
        const double adjoint_defect = [&] {
            double w = 0.0;
            for (const auto& m : spanning) w = std::max(w, span_residual(basis, m.adjoint()));
            return w;
        }();
        if (closure > tol * 10.0 || adjoint_defect > tol * 10.0)
            throw ContractViolation(
                "input span is not a unital *-closed algebra (closure defect " +
                std::to_string(std::max(closure, adjoint_defect)) + ")");
    }

    // center: elements commuting with the whole basis
    std::vector<std::vector<Complex>> center_rows;
    {
        // columns indexed by basis coefficients; rows stack vec([B_b, B_t])
        std::vector<std::vector<Complex>> cols(basis.size());
        for (std::size_t b = 0; b < basis.size(); ++b) {
            std::vector<Complex> col;
            col.reserve(basis.size() * d * d);
            for (std::size_t t = 0; t < basis.size(); ++t) {
                const auto c = commutator(basis[b], basis[t]);
                for (const auto& z : c.entries()) col.push_back(z);
            }
            cols[b] = std::move(col);
        }
        const auto system = from_columns(cols);
        const double scale = std::max(1.0, operator_norm(system));
        const auto kernel = null_space(system, 1e-8 * scale);
        for (std::size_t k = 0; k < kernel.cols(); ++k) {
            std::vector<Complex> coeff(basis.size());
            for (std::size_t b = 0; b < basis.size(); ++b) coeff[b] = kernel(b, k);
            center_rows.push_back(std::move(coeff));
        }
    }
    std::vector<ComplexMatrix> center;
    for (const auto& coeff : center_rows) {
        ComplexMatrix z(d, d);
        for (std::size_t b = 0; b < basis.size(); ++b) z = z + basis[b] * coeff[b];
        center.push_back(std::move(z));
    }

    // minimal central projections via joint eigenspace refinement of the
    // (abelian, *-closed) center
    std::vector<ComplexMatrix> spaces{ComplexMatrix::identity(d)};
    for (const auto& z : center) {
        for (const auto& h :
             {(z + z.adjoint()) * Complex(0.5, 0.0), (z - z.adjoint()) * Complex(0.0, -0.5)}) {
            std::vector<ComplexMatrix> refined;
            const double scale = 1.0 + h.max_abs();
            for (const auto& v : spaces) {
                const auto eig = hermitian_eig(v.adjoint() * h * v, 1e-7);
                for (const auto& [from, to] : eig_clusters(eig.values, scale))
                    refined.push_back(v * isometry_from_eigcols(eig, from, to));
            }
            spaces = std::move(refined);
        }
    }

    // per central block: factor dimensions and an explicit matrix-unit frame
    struct Block {
        std::size_t n = 0, m = 0;
        std::vector<std::vector<Complex>> columns; // n*m columns of U
    };
    std::vector<Block> blocks;
    for (const auto& v : spaces) {
        Block blk;
        const std::size_t rank = v.cols();
        std::vector<ComplexMatrix> compressed;
        for (const auto& b : basis) compressed.push_back(v.adjoint() * b * v);
        const auto comp_basis = orthonormal_span_local(compressed, 1e-8);
        const std::size_t n2 = comp_basis.size();
        const std::size_t n = std::size_t(std::lround(std::sqrt(double(n2))));
        if (n * n != n2 || rank % n != 0)
            throw ContractViolation("central block does not compress to a factor");
        const std::size_t mult = rank / n;
        blk.n = n;
        blk.m = mult;

        // generic Hermitian element of the factor: n clusters of size m
        std::optional<EigResult> split;
        std::vector<std::pair<std::size_t, std::size_t>> clusters;
        std::uint64_t state = 0x2545f4914f6cdd1dull;
        for (int attempt = 0; attempt < 24 && !split; ++attempt) {
            ComplexMatrix h(rank, rank);
            for (const auto& cb : comp_basis) {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                const double c1 = double(state % 1999) / 999.5 - 1.0;
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                const double c2 = double(state % 1999) / 999.5 - 1.0;
                h = h + (cb + cb.adjoint()) * Complex(0.5 * c1, 0.0) +
                    (cb - cb.adjoint()) * Complex(0.0, -0.5 * c2);
            }
            const auto eig = hermitian_eig(h, 1e-7);
            const auto cl = eig_clusters(eig.values, 1.0 + h.max_abs());
            if (cl.size() != n) continue;
            bool sizes_ok = true;
            for (const auto& [from, to] : cl) sizes_ok &= (to - from) == mult;
            if (sizes_ok) {
                split = eig;
                clusters = cl;
            }
        }
        if (!split)
            throw ContractViolation("no generic element separated the factor's diagonal");

        // diagonal frames q_p and coherent partial isometries q_p A q_1
        std::vector<ComplexMatrix> frames; // rank x m isometries per p
        for (const auto& [from, to] : clusters)
            frames.push_back(isometry_from_eigcols(*split, from, to));
        std::vector<ComplexMatrix> aligned{frames[0]};
        for (std::size_t p = 1; p < n; ++p) {
            // w = q_p a q_1 is a scalar times a partial isometry for a
            // generic algebra element a; its polar part transports the frame
            ComplexMatrix w;
            for (const auto& cb : comp_basis) {
                const auto cand = frames[p].adjoint() * cb * frames[0];
                if (operator_norm(cand) > 1e-6) {
                    w = cand;
                    break;
                }
            }
            if (w.empty())
                throw ContractViolation("factor is not transitive across its frame");
            const auto svd_res = svd(w);
            ComplexMatrix polar(w.rows(), w.cols());
            for (std::size_t k = 0; k < svd_res.sigma.size(); ++k) {
                if (svd_res.sigma[k] <= 1e-9 * svd_res.sigma.front())
                    throw ContractViolation("degenerate transporter in the factor");
                for (std::size_t i = 0; i < w.rows(); ++i)
                    for (std::size_t jj = 0; jj < w.cols(); ++jj)
                        polar(i, jj) += svd_res.u(i, k) * std::conj(svd_res.v(jj, k));
            }
            aligned.push_back(frames[p] * polar);
        }
        // columns ordered p-major then multiplicity index, embedded into C^d
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t j = 0; j < mult; ++j) {
                const auto col = v * aligned[p];
                std::vector<Complex> e(d);
                for (std::size_t i = 0; i < d; ++i) e[i] = col(i, j);
                blk.columns.push_back(std::move(e));
            }
        blocks.push_back(std::move(blk));
    }

    // canonical order: blocks sorted by (n, m)
    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
        return a.n != b.n ? a.n < b.n : a.m < b.m;
    });

    std::vector<std::size_t> dims, mults;
    std::vector<std::vector<Complex>> ucols;
    for (const auto& blk : blocks) {
        dims.push_back(blk.n);
        mults.push_back(blk.m);
        for (const auto& col : blk.columns) ucols.push_back(col);
    }
    const auto u = from_columns(ucols);
    Representation rep(FiniteCStarAlgebra(dims), mults, u);

    // both spans must agree: the recovered generators inside the input span
    // and the input basis inside the recovered span
    const auto images = rep.generator_images();
    const auto image_basis = orthonormal_span_local(images, 1e-10);
    double residual = 0.0;
    for (const auto& m : images) residual = std::max(residual, span_residual(basis, m));
    for (const auto& m : basis)
        residual = std::max(residual, span_residual(image_basis, m));
    if (residual > tol * 100.0)
        throw ContractViolation("recovered block form does not reproduce the span, defect " +
                                std::to_string(residual));
    return RecoveredStructure{std::move(rep), residual};
}

} // namespace ncg
