#include "ncg/morphisms.hpp"

#include <cmath>
#include <string>

namespace ncg {

namespace {

void require_same_triple(const SpectralTriple& a, const SpectralTriple& b,
                         const std::string& where) {
    if (a.algebra() != b.algebra() || a.dim() != b.dim() ||
        max_abs_diff(a.dirac(), b.dirac()) > 1e-9 ||
        max_abs_diff(a.rep().basis_change(), b.rep().basis_change()) > 1e-9)
        throw DimensionError(where + ": middle triples do not match");
}

std::size_t global_basis_offset(const HilbertBimodule& m, std::size_t comp,
                                std::size_t col) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < comp; ++k) off += m.components()[k].dim();
    return off + col;
}

// Global index of the basis tensor xi_r (x) zeta_t inside tensor_product(x1, x2).
std::size_t tensor_global_index(const HilbertBimodule& x1, const HilbertBimodule& x2,
                                const HilbertBimodule& prod, std::size_t r,
                                std::size_t t) {
    std::size_t racc = r, comp1 = 0;
    while (racc >= x1.components()[comp1].dim()) racc -= x1.components()[comp1++].dim();
    std::size_t tacc = t, comp2 = 0;
    while (tacc >= x2.components()[comp2].dim()) tacc -= x2.components()[comp2++].dim();
    const auto& c1 = x1.components()[comp1];
    const auto& c2 = x2.components()[comp2];
    if (c1.j != c2.i) throw DimensionError("tensor basis index over mismatched cells");
    const std::size_t i = c1.i, j = c1.j, k = c2.j;
    std::size_t col = 0;
    for (std::size_t jp = 0; jp < j; ++jp)
        col += x1.component_dim(i, jp) * x2.component_dim(jp, k);
    col += racc * c2.dim() + tacc;
    return global_basis_offset(prod, *prod.component_at(i, k), col);
}

} // namespace

TripleMorphism identity_morphism(const SpectralTriple& t) {
    return TripleMorphism{t, t, AlgebraHomomorphism::identity(t.algebra()),
                          ComplexMatrix::identity(t.dim()),
                          MorphismFlags{t.real_structure().has_value(),
                                        t.grading().has_value()}};
}

TripleMorphism unitary_equivalence(const SpectralTriple& t, const ComplexMatrix& w) {
    auto target = t.conjugated(w);
    return TripleMorphism{t, std::move(target),
                          AlgebraHomomorphism::identity(t.algebra()), w,
                          MorphismFlags{t.real_structure().has_value(),
                                        t.grading().has_value()}};
}

TripleMorphism compose(const TripleMorphism& outer, const TripleMorphism& inner) {
    require_same_triple(inner.target, outer.source, "compose");
    return TripleMorphism{inner.source, outer.target,
                          outer.phi.compose_after(inner.phi),
                          outer.intertwiner * inner.intertwiner,
                          MorphismFlags{outer.flags.check_real && inner.flags.check_real,
                                        outer.flags.check_even && inner.flags.check_even}};
}

Report validate_tgs(const TripleMorphism& m, double tol) {
    Report rep;
    rep.subject = "tgs-morphism";
    const auto& phi = m.intertwiner;
    if (phi.rows() != m.target.dim() || phi.cols() != m.source.dim())
        throw DimensionError("intertwiner shape mismatch");

    double inter = 0.0;
    for (const auto& g : m.source.algebra().matrix_unit_basis()) {
        const auto lhs = m.target.pi(m.phi.apply(g)) * phi;
        const auto rhs = phi * m.source.pi(g);
        inter = std::max(inter, operator_norm(lhs - rhs));
    }
    rep.add_residual("representation-intertwine", inter, tol);
    rep.add_residual("dirac-intertwine",
                     operator_norm(m.target.dirac() * phi - phi * m.source.dirac()), tol);

    if (m.flags.check_real) {
        if (!m.source.real_structure() || !m.target.real_structure())
            throw PreconditionError("check_real set but a real structure is missing");
        // J2 Phi = Phi J1 for antiunitaries: U2 conj(Phi) = Phi U1
        const auto defect = m.target.real_structure()->unitary_part() * phi.conj() -
                            phi * m.source.real_structure()->unitary_part();
        rep.add_residual("real-intertwine", operator_norm(defect), tol);
    }
    if (m.flags.check_even) {
        if (!m.source.grading() || !m.target.grading())
            throw PreconditionError("check_even set but a grading is missing");
        rep.add_residual(
            "grading-intertwine",
            operator_norm(*m.target.grading() * phi - phi * *m.source.grading()), tol);
    }
    return rep;
}

Report validate_riemannian(const TripleMorphism& m, double tol) {
    Report rep;
    rep.subject = "riemannian-morphism";
    const auto& phi = m.intertwiner;
    if (phi.rows() != m.target.dim() || phi.cols() != m.source.dim())
        throw DimensionError("intertwiner shape mismatch");

    double inter = 0.0, comm = 0.0;
    for (const auto& g : m.source.algebra().matrix_unit_basis()) {
        const auto image = m.phi.apply(g);
        inter = std::max(inter,
                         operator_norm(m.target.pi(image) * phi - phi * m.source.pi(g)));
        const auto lhs = commutator(m.target.dirac(), m.target.pi(image)) * phi;
        const auto rhs = phi * commutator(m.source.dirac(), m.source.pi(g));
        comm = std::max(comm, operator_norm(lhs - rhs));
    }
    rep.add_residual("representation-intertwine", inter, tol);
    rep.add_residual("commutator-intertwine", comm, tol);
    return rep;
}

namespace {

Report metric_report(const TripleMorphism& m,
                     const std::vector<std::pair<PureState, PureState>>& pairs,
                     double tol, double solver_tol) {
    Report rep;
    rep.subject = "metric-morphism";
    if (!m.phi.is_epi())
        throw PreconditionError(
            "metric morphism requires an epimorphism; the induced map misses " +
            std::to_string(m.phi.target().dim() -
                           matrix_rank(m.phi.linear(), kDefaultTol)) +
            " target dimension(s)");
    rep.add("epimorphism", CheckStatus::Pass, 0.0);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            const auto target_d =
                connes_distance(m.target, pairs[i].first, pairs[j].first, solver_tol);
            const auto source_d =
                connes_distance(m.source, pairs[i].second, pairs[j].second, solver_tol);
            ++checked;
            const std::string name = "pair-" + std::to_string(i) + "-" + std::to_string(j);
            if (target_d.infinite() || source_d.infinite()) {
                const bool both = target_d.infinite() && source_d.infinite();
                rep.add(name, both ? CheckStatus::Pass : CheckStatus::Fail, both ? 0.0 : 1.0,
                        both ? "both distances infinite"
                             : "one side infinite, the other finite");
                if (!both) worst = std::max(worst, 1.0);
                continue;
            }
            const double diff = std::abs(target_d.value - source_d.value);
            worst = std::max(worst, diff);
            rep.add(name, diff <= tol ? CheckStatus::Pass : CheckStatus::Fail, diff,
                    "d_target = " + std::to_string(target_d.value) +
                        ", d_source = " + std::to_string(source_d.value));
        }
    }
    if (checked == 0)
        rep.add("state-pairs", CheckStatus::Pass, 0.0, "no pairs to compare (vacuous)");
    return rep;
}

} // namespace

Report validate_metric(const TripleMorphism& m, double tol, double solver_tol) {
    if (!m.source.algebra().is_commutative() || !m.target.algebra().is_commutative())
        throw PreconditionError(
            "character enumeration needs commutative algebras; supply state samples");
    const auto pullback = pullback_spectrum(m.phi);
    std::vector<std::pair<PureState, PureState>> pairs;
    const auto target_chars = spectrum(m.target.algebra());
    for (std::size_t j = 0; j < target_chars.size(); ++j)
        pairs.emplace_back(
            PureState::from_character(target_chars[j]),
            PureState::from_character(Character(m.source.algebra(), pullback[j])));
    return metric_report(m, pairs, tol, solver_tol);
}

Report validate_metric(const TripleMorphism& m,
                       const std::vector<std::pair<PureState, PureState>>& samples,
                       double tol, double solver_tol) {
    return metric_report(m, samples, tol, solver_tol);
}

OneForm::OneForm(const SpectralTriple& t, std::vector<Pair> pairs)
    : pairs_(std::move(pairs)), value_(t.dim(), t.dim()) {
    for (const auto& p : pairs_) {
        if (p.left.algebra() != t.algebra() || p.right.algebra() != t.algebra())
            throw DomainError("one-form pair from a different algebra");
        value_ = value_ + t.pi(p.left) * commutator(t.dirac(), t.pi(p.right)) * p.coeff;
    }
}

OneForm OneForm::zero(const SpectralTriple& t) { return OneForm(t, {}); }

OneForm OneForm::scaled(Complex s) const {
    OneForm out = *this;
    for (auto& p : out.pairs_) p.coeff *= s;
    out.value_ = value_ * s;
    return out;
}

OneForm OneForm::plus(const OneForm& o) const {
    OneForm out = *this;
    out.pairs_.insert(out.pairs_.end(), o.pairs_.begin(), o.pairs_.end());
    out.value_ = value_ + o.value_;
    return out;
}

double OneForm::form_space_residual(const SpectralTriple& t) const {
    return omega_forms(t, 1).projection_residual(value_);
}

FluctuationResult inner_fluctuation(const SpectralTriple& t, const OneForm& a,
                                    double tol) {
    if (!t.real_structure())
        throw PreconditionError("inner fluctuation needs a real structure");
    Report rep;
    rep.subject = "inner-fluctuation";
    ComplexMatrix av = a.value();
    const double herm = hermitian_residual(av);
    bool symmetrized = false;
    if (herm > tol) {
        av = (av + av.adjoint()) * Complex(0.5, 0.0);
        symmetrized = true;
        rep.add("one-form-selfadjoint", CheckStatus::Pass, herm,
                "input symmetrized; original defect recorded");
    } else {
        rep.add("one-form-selfadjoint", CheckStatus::Pass, herm, "");
    }
    const auto transported = t.real_structure()->sandwich(av);
    auto d = t.dirac() + av + transported;
    d = (d + d.adjoint()) * Complex(0.5, 0.0); // clear roundoff asymmetry
    rep.add_residual("fluctuated-dirac-hermitian", hermitian_residual(d), tol);

    auto out = t.with_dirac(std::move(d));
    double zeroth = 0.0;
    const auto gens = t.algebra().matrix_unit_basis();
    for (const auto& x : gens)
        for (const auto& y : gens)
            zeroth = std::max(zeroth, commutator(out.pi(x), out.opposite(y)).max_abs());
    rep.add_residual("zeroth-order", zeroth, tol);
    return FluctuationResult{std::move(out), std::move(rep), symmetrized};
}

namespace {

OneForm oneform_left_mult(const SpectralTriple& t, const AlgebraElement& a,
                          const OneForm& f) {
    std::vector<OneForm::Pair> pairs;
    for (const auto& p : f.pairs()) pairs.push_back({a * p.left, p.right, p.coeff});
    return OneForm(t, std::move(pairs));
}

// pi(a)[D, pi(b)] pi(c) = pi(a)[D, pi(bc)] - pi(ab)[D, pi(c)]
OneForm oneform_right_mult(const SpectralTriple& t, const OneForm& f,
                           const AlgebraElement& c) {
    std::vector<OneForm::Pair> pairs;
    for (const auto& p : f.pairs()) {
        pairs.push_back({p.left, p.right * c, p.coeff});
        pairs.push_back({p.left * p.right, c, -p.coeff});
    }
    return OneForm(t, std::move(pairs));
}

} // namespace

MoritaConnection::MoritaConnection(SpectralTriple source, SpectralTriple target,
                                   HilbertBimodule bimodule,
                                   std::vector<std::vector<Term>> values)
    : source_(std::move(source)), target_(std::move(target)),
      bimodule_(std::move(bimodule)), values_(std::move(values)) {
    if (!source_.algebra().is_commutative() || !target_.algebra().is_commutative())
        throw DomainError("Morita connections are realized over commutative algebras");
    if (source_.algebra().block_count() != bimodule_.left_blocks() ||
        target_.algebra().block_count() != bimodule_.right_blocks())
        throw DimensionError("bimodule does not join the two algebras");
    const std::size_t total = bimodule_.total_dim();
    if (values_.size() != total)
        throw DimensionError("connection needs one value per basis element");
    // canonical gauge: omega_rs = pi(e_{j_s}) omega_rs
    std::vector<std::size_t> right_index(total);
    {
        std::size_t r = 0;
        for (const auto& comp : bimodule_.components())
            for (std::size_t c = 0; c < comp.dim(); ++c) right_index[r++] = comp.j;
    }
    for (auto& terms : values_)
        for (auto& term : terms) {
            if (term.target_index >= total)
                throw DimensionError("connection term index out of range");
            const auto e =
                target_.algebra().block_idempotent(right_index[term.target_index]);
            term.form = oneform_left_mult(target_, e, term.form);
        }
}

MoritaConnection MoritaConnection::flat(const SpectralTriple& source,
                                        const SpectralTriple& target,
                                        const HilbertBimodule& bimodule) {
    std::vector<std::vector<Term>> values;
    std::size_t r = 0;
    for (const auto& comp : bimodule.components())
        for (std::size_t c = 0; c < comp.dim(); ++c, ++r) {
            const auto e = target.algebra().block_idempotent(comp.j);
            values.push_back({Term{r, OneForm(target, {{e, e, Complex(1.0, 0.0)}})}});
        }
    return MoritaConnection(source, target, bimodule, std::move(values));
}

MoritaConnection MoritaConnection::identity(const SpectralTriple& t) {
    const std::size_t n = t.algebra().block_count();
    auto bim = HilbertBimodule::identity(n);
    std::vector<std::vector<Term>> values(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto ek = t.algebra().block_idempotent(k);
        for (std::size_t s = 0; s < n; ++s) {
            const auto es = t.algebra().block_idempotent(s);
            values[k].push_back(Term{s, OneForm(t, {{es, ek, Complex(1.0, 0.0)}})});
        }
    }
    return MoritaConnection(t, t, std::move(bim), std::move(values));
}

double MoritaConnection::leibniz_residual() const {
    const std::size_t total = bimodule_.total_dim();
    std::vector<std::size_t> right_index(total);
    {
        std::size_t r = 0;
        for (const auto& comp : bimodule_.components())
            for (std::size_t c = 0; c < comp.dim(); ++c) right_index[r++] = comp.j;
    }
    const std::size_t h = target_.dim();
    double worst = 0.0;
    for (std::size_t r = 0; r < total; ++r) {
        for (std::size_t j = 0; j < target_.algebra().block_count(); ++j) {
            const auto ej = target_.algebra().block_idempotent(j);
            std::vector<ComplexMatrix> lhs(total, ComplexMatrix(h, h));
            std::vector<ComplexMatrix> rhs(total, ComplexMatrix(h, h));
            if (right_index[r] == j)
                for (const auto& term : values_[r])
                    lhs[term.target_index] = lhs[term.target_index] + term.form.value();
            for (const auto& term : values_[r]) {
                const auto moved = oneform_right_mult(target_, term.form, ej);
                rhs[term.target_index] = rhs[term.target_index] + moved.value();
            }
            // + xi_r (x) [D, pi(e_j)], canonicalized
            const auto ejr = target_.algebra().block_idempotent(right_index[r]);
            rhs[r] = rhs[r] + target_.pi(ejr) * commutator(target_.dirac(), target_.pi(ej));
            for (std::size_t s = 0; s < total; ++s)
                worst = std::max(worst, max_abs_diff(lhs[s], rhs[s]));
        }
    }
    return worst;
}

namespace {

// isometry onto the range of the spectral projection pi(e_j)
ComplexMatrix block_isometry(const SpectralTriple& t, std::size_t j) {
    const auto p = t.pi(t.algebra().block_idempotent(j));
    const auto eig = hermitian_eig(p, 1e-8);
    std::vector<std::vector<Complex>> cols;
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        if (eig.values[k] > 0.5) {
            std::vector<Complex> col(p.rows());
            for (std::size_t i = 0; i < p.rows(); ++i) col[i] = eig.vectors(i, k);
            cols.push_back(std::move(col));
        }
    }
    if (cols.empty()) return ComplexMatrix(p.rows(), 0);
    return from_columns(cols);
}

} // namespace

ComplexMatrix MoritaConnection::module_dirac() const {
    const std::size_t total = bimodule_.total_dim();
    std::vector<std::size_t> right_index(total);
    {
        std::size_t r = 0;
        for (const auto& comp : bimodule_.components())
            for (std::size_t c = 0; c < comp.dim(); ++c) right_index[r++] = comp.j;
    }
    const std::size_t blocks = target_.algebra().block_count();
    std::vector<ComplexMatrix> isometries;
    std::vector<std::size_t> hdim(blocks);
    for (std::size_t j = 0; j < blocks; ++j) {
        isometries.push_back(block_isometry(target_, j));
        hdim[j] = isometries[j].cols();
    }
    std::vector<std::size_t> offset(total, 0);
    std::size_t dim = 0;
    for (std::size_t r = 0; r < total; ++r) {
        offset[r] = dim;
        dim += hdim[right_index[r]];
    }
    ComplexMatrix d(dim, dim);
    for (std::size_t r = 0; r < total; ++r) {
        const auto& vr = isometries[right_index[r]];
        d.set_block(offset[r], offset[r], vr.adjoint() * target_.dirac() * vr);
        for (const auto& term : values_[r]) {
            const auto& vs = isometries[right_index[term.target_index]];
            const auto blk = vs.adjoint() * term.form.value() * vr;
            for (std::size_t i = 0; i < blk.rows(); ++i)
                for (std::size_t jj = 0; jj < blk.cols(); ++jj)
                    d(offset[term.target_index] + i, offset[r] + jj) =
                        d(offset[term.target_index] + i, offset[r] + jj) + blk(i, jj);
        }
    }
    return d;
}

double MoritaConnection::hermitian_compatibility_residual() const {
    return hermitian_residual(module_dirac());
}

MoritaConnection compose_morita_connes(const MoritaConnection& m2,
                                       const MoritaConnection& m1) {
    require_same_triple(m1.target(), m2.source(), "compose_morita_connes");
    const auto& x1 = m1.bimodule();
    const auto& x2 = m2.bimodule();
    if (x1.right_blocks() != x2.left_blocks())
        throw DimensionError("compose_morita_connes: inner algebras do not match");
    auto x3 = tensor_product(x1, x2);

    const std::size_t n1 = x1.total_dim(), n2 = x2.total_dim();
    std::vector<std::size_t> row1(n1), col1(n1), row2(n2), col2(n2);
    {
        std::size_t r = 0;
        for (const auto& comp : x1.components())
            for (std::size_t c = 0; c < comp.dim(); ++c, ++r) {
                row1[r] = comp.i;
                col1[r] = comp.j;
            }
        r = 0;
        for (const auto& comp : x2.components())
            for (std::size_t c = 0; c < comp.dim(); ++c, ++r) {
                row2[r] = comp.i;
                col2[r] = comp.j;
            }
    }

    std::vector<std::vector<MoritaConnection::Term>> values(x3.total_dim());
    for (std::size_t r = 0; r < n1; ++r) {
        for (std::size_t t = 0; t < n2; ++t) {
            if (col1[r] != row2[t]) continue;
            const std::size_t u3 = tensor_global_index(x1, x2, x3, r, t);
            auto& sink = values[u3];

            // term 1: xi_r (x) (nabla2 zeta_t); summands whose zeta-leg
            // lands in another left block die in the balanced product
            for (const auto& term : m2.values()[t]) {
                if (row2[term.target_index] != col1[r]) continue;
                sink.push_back(
                    {tensor_global_index(x1, x2, x3, r, term.target_index), term.form});
            }

            // term 2: (nabla1 xi_r)(zeta_t (x) h3), with the one-form legs
            // read through the inner-deformation Dirac of m2:
            // pi(a)[D_{nabla2}, pi(b)](zeta_t (x) h) =
            //   sum_u a_{row(u)} (b_{row(t)} - b_{row(u)}) zeta_u (x) nu_{tu} h
            for (const auto& term : m1.values()[r]) {
                const std::size_t s = term.target_index;
                for (const auto& p : term.form.pairs()) {
                    const Complex bt = p.right.scalar(row2[t]);
                    for (const auto& nu : m2.values()[t]) {
                        const std::size_t u = nu.target_index;
                        if (row2[u] != col1[s]) continue;
                        const Complex au = p.left.scalar(row2[u]);
                        const Complex bu = p.right.scalar(row2[u]);
                        const Complex factor = p.coeff * au * (bt - bu);
                        if (std::abs(factor) < 1e-15) continue;
                        sink.push_back({tensor_global_index(x1, x2, x3, s, u),
                                        nu.form.scaled(factor)});
                    }
                }
            }
        }
    }

    // merge summands that share a target index
    for (auto& terms : values) {
        std::vector<MoritaConnection::Term> merged;
        for (auto& term : terms) {
            bool found = false;
            for (auto& m : merged)
                if (m.target_index == term.target_index) {
                    m.form = m.form.plus(term.form);
                    found = true;
                    break;
                }
            if (!found) merged.push_back(std::move(term));
        }
        terms = std::move(merged);
    }

    return MoritaConnection(m1.source(), m2.target(), std::move(x3), std::move(values));
}

double module_dirac_residual(const MoritaConnection& composed,
                             const MoritaConnection& reference,
                             const std::vector<std::size_t>& index_map) {
    const auto da = composed.module_dirac();
    const auto db = reference.module_dirac();
    if (da.rows() != db.rows())
        throw DimensionError("materialized modules have different dimensions");

    const auto block_offsets = [](const MoritaConnection& m) {
        std::vector<std::size_t> right_index;
        for (const auto& comp : m.bimodule().components())
            for (std::size_t c = 0; c < comp.dim(); ++c) right_index.push_back(comp.j);
        std::vector<std::size_t> off(right_index.size(), 0), width(right_index.size(), 0);
        std::size_t dim = 0;
        for (std::size_t r = 0; r < right_index.size(); ++r) {
            const auto p =
                m.target().pi(m.target().algebra().block_idempotent(right_index[r]));
            const std::size_t w = std::size_t(std::lround(p.trace().real()));
            off[r] = dim;
            width[r] = w;
            dim += w;
        }
        return std::make_pair(off, width);
    };
    const auto [offa, wa] = block_offsets(composed);
    const auto [offb, wb] = block_offsets(reference);

    ComplexMatrix perm(db.rows(), da.rows());
    for (std::size_t r = 0; r < index_map.size(); ++r) {
        if (wa[r] != wb[index_map[r]])
            throw DimensionError("index map joins blocks of different widths");
        for (std::size_t q = 0; q < wa[r]; ++q)
            perm(offb[index_map[r]] + q, offa[r] + q) = 1.0;
    }
    return operator_norm(perm * da * perm.adjoint() - db);
}

std::vector<std::size_t> unit_left_index_map(const MoritaConnection& m) {
    // compose(identity(target), m): X (x) Id
    const auto& x = m.bimodule();
    const auto prod = tensor_product(x, HilbertBimodule::identity(x.right_blocks()));
    std::vector<std::size_t> map(prod.total_dim());
    std::size_t r = 0;
    for (const auto& comp : x.components())
        for (std::size_t c = 0; c < comp.dim(); ++c, ++r) {
            const auto pc = prod.component_at(comp.i, comp.j);
            map[global_basis_offset(prod, *pc, c)] = r;
        }
    return map;
}

std::vector<std::size_t> unit_right_index_map(const MoritaConnection& m) {
    // compose(m, identity(source)): Id (x) X
    const auto& x = m.bimodule();
    const auto prod = tensor_product(HilbertBimodule::identity(x.left_blocks()), x);
    std::vector<std::size_t> map(prod.total_dim());
    std::size_t r = 0;
    for (const auto& comp : x.components())
        for (std::size_t c = 0; c < comp.dim(); ++c, ++r) {
            const auto pc = prod.component_at(comp.i, comp.j);
            map[global_basis_offset(prod, *pc, c)] = r;
        }
    return map;
}

std::vector<std::size_t> associator_index_map(const HilbertBimodule& x,
                                              const HilbertBimodule& y,
                                              const HilbertBimodule& z) {
    const auto xy = tensor_product(x, y);
    const auto left = tensor_product(xy, z); // ((x y) z)
    const auto yz = tensor_product(y, z);
    const auto right = tensor_product(x, yz); // (x (y z))

    std::vector<std::size_t> map(left.total_dim());
    std::size_t rglob = 0;
    for (const auto& cx : x.components()) {
        for (std::size_t c1 = 0; c1 < cx.dim(); ++c1, ++rglob) {
            std::size_t tglob = 0;
            for (const auto& cy : y.components()) {
                for (std::size_t c2 = 0; c2 < cy.dim(); ++c2, ++tglob) {
                    if (cy.i != cx.j) continue;
                    std::size_t uglob = 0;
                    for (const auto& cz : z.components()) {
                        for (std::size_t c3 = 0; c3 < cz.dim(); ++c3, ++uglob) {
                            if (cz.i != cy.j) continue;
                            const auto rt = tensor_global_index(x, y, xy, rglob, tglob);
                            const auto lidx = tensor_global_index(xy, z, left, rt, uglob);
                            const auto tu = tensor_global_index(y, z, yz, tglob, uglob);
                            const auto ridx =
                                tensor_global_index(x, yz, right, rglob, tu);
                            map[lidx] = ridx;
                        }
                    }
                }
            }
        }
    }
    return map;
}

} // namespace ncg
