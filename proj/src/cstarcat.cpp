#include "ncg/cstarcat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncg {

namespace {

ComplexMatrix stack_vecs(const std::vector<ComplexMatrix>& ms) {
    std::vector<std::vector<Complex>> cols;
    for (const auto& m : ms) cols.push_back(m.vec());
    return from_columns(cols);
}

} // namespace

FiniteCStarCategory::FiniteCStarCategory(std::vector<std::string> objects,
                                         std::vector<std::size_t> hilbert_dims,
                                         std::vector<std::vector<ComplexMatrix>> hom_bases)
    : objects_(std::move(objects)), dims_(std::move(hilbert_dims)),
      homs_(std::move(hom_bases)) {
    const std::size_t n = objects_.size();
    if (n == 0) throw DimensionError("category needs at least one object");
    if (dims_.size() != n) throw DimensionError("one Hilbert dimension per object");
    if (homs_.size() != n * n) throw DimensionError("one hom basis per object pair");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (const auto& m : homs_[pair_index(a, b)])
                if (m.rows() != dims_[a] || m.cols() != dims_[b])
                    throw DimensionError("hom basis shape mismatch at (" + objects_[a] +
                                         "," + objects_[b] + ")");
}

FiniteCStarCategory FiniteCStarCategory::one_object_diagonal(std::size_t n) {
    std::vector<ComplexMatrix> basis;
    for (std::size_t i = 0; i < n; ++i) {
        ComplexMatrix e(n, n);
        e(i, i) = 1.0;
        basis.push_back(std::move(e));
    }
    return FiniteCStarCategory({"A"}, {n}, {basis});
}

std::pair<std::vector<Complex>, double>
FiniteCStarCategory::expand(std::size_t a, std::size_t b, const ComplexMatrix& m) const {
    const auto& basis = homs_[pair_index(a, b)];
    if (basis.empty()) return {std::vector<Complex>{}, m.frobenius_norm()};
    const auto stacked = stack_vecs(basis);
    const auto sol = least_squares(stacked, ComplexMatrix::column(m.vec()));
    std::vector<Complex> coeffs(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) coeffs[k] = sol(k, 0);
    const double residual =
        (stacked * sol - ComplexMatrix::column(m.vec())).frobenius_norm();
    return {std::move(coeffs), residual};
}

ComplexMatrix FiniteCStarCategory::assemble(std::size_t a, std::size_t b,
                                            const std::vector<Complex>& coeffs) const {
    const auto& basis = homs_[pair_index(a, b)];
    if (coeffs.size() != basis.size())
        throw DimensionError("coefficient count does not match the hom basis");
    ComplexMatrix m(dims_[a], dims_[b]);
    for (std::size_t k = 0; k < basis.size(); ++k) m = m + basis[k] * coeffs[k];
    return m;
}

Report validate_category(const FiniteCStarCategory& c, double tol) {
    Report rep;
    rep.subject = "cstar-category";
    const std::size_t n = c.object_count();

    double ident = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        ident = std::max(
            ident, c.expand(a, a, ComplexMatrix::identity(c.hilbert_dims()[a])).second);
    rep.add_residual("identities-present", ident, tol);

    double invol = 0.0, compose = 0.0, commut = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (const auto& x : c.hom_basis(a, b)) {
                invol = std::max(invol, c.expand(b, a, x.adjoint()).second);
                for (std::size_t d = 0; d < n; ++d)
                    for (const auto& y : c.hom_basis(b, d))
                        compose = std::max(compose, c.expand(a, d, x * y).second);
            }
        }
        for (const auto& x : c.hom_basis(a, a))
            for (const auto& y : c.hom_basis(a, a))
                commut = std::max(commut, commutator(x, y).max_abs());
    }
    rep.add_residual("involution-closure", invol, tol);
    rep.add_residual("composition-closure", compose, tol);
    rep.add_residual("diagonal-commutativity", commut, tol);

    // fullness: span{x^* y} = C_BB and span{x y^*} = C_AA for every pair
    double fullness = 0.0;
    bool full = true;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto& basis = c.hom_basis(a, b);
            if (basis.empty()) {
                full = false;
                fullness = std::max(fullness, 1.0);
                continue;
            }
            std::vector<ComplexMatrix> right, left;
            for (const auto& x : basis)
                for (const auto& y : basis) {
                    right.push_back(x.adjoint() * y);
                    left.push_back(x * y.adjoint());
                }
            const auto right_span = stack_vecs(right);
            for (const auto& z : c.hom_basis(b, b)) {
                const auto sol = least_squares(right_span, ComplexMatrix::column(z.vec()));
                const double res =
                    (right_span * sol - ComplexMatrix::column(z.vec())).frobenius_norm();
                fullness = std::max(fullness, res);
                if (res > tol) full = false;
            }
            const auto left_span = stack_vecs(left);
            for (const auto& z : c.hom_basis(a, a)) {
                const auto sol = least_squares(left_span, ComplexMatrix::column(z.vec()));
                const double res =
                    (left_span * sol - ComplexMatrix::column(z.vec())).frobenius_norm();
                fullness = std::max(fullness, res);
                if (res > tol) full = false;
            }
        }
    rep.add("fullness", full ? CheckStatus::Pass : CheckStatus::Fail, fullness);

    // C*-identity on pseudo-random elements (holds structurally; checked
    // anyway with a fixed deterministic sequence)
    double cstar = 0.0;
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return double(state % 2000) / 1000.0 - 1.0;
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto& basis = c.hom_basis(a, b);
            if (basis.empty()) continue;
            for (int trial = 0; trial < 3; ++trial) {
                ComplexMatrix x(c.hilbert_dims()[a], c.hilbert_dims()[b]);
                for (const auto& e : basis) x = x + e * Complex(next(), next());
                const double lhs = operator_norm(x.adjoint() * x);
                const double rhs = operator_norm(x);
                cstar = std::max(cstar, std::abs(lhs - rhs * rhs) / (1.0 + rhs * rhs));
            }
        }
    rep.add_residual("cstar-identity", cstar, 1e-9);
    return rep;
}

Complex StarFunctor::evaluate(const FiniteCStarCategory& c, std::size_t a, std::size_t b,
                              const std::vector<Complex>& coeffs) const {
    const auto& vals = values[c.pair_index(a, b)];
    if (coeffs.size() != vals.size()) throw DimensionError("coefficient count mismatch");
    Complex acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) acc += coeffs[k] * vals[k];
    return acc;
}

double star_functor_residual(const FiniteCStarCategory& c, const StarFunctor& f) {
    const std::size_t n = c.object_count();
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const auto [icoeff, ires] =
            c.expand(a, a, ComplexMatrix::identity(c.hilbert_dims()[a]));
        worst = std::max(worst, ires);
        worst = std::max(worst, std::abs(f.evaluate(c, a, a, icoeff) - Complex(1.0, 0.0)));
        for (std::size_t b = 0; b < n; ++b) {
            const auto& basis = c.hom_basis(a, b);
            for (std::size_t i = 0; i < basis.size(); ++i) {
                const auto [acoeff, ares] = c.expand(b, a, basis[i].adjoint());
                worst = std::max(worst, ares);
                worst = std::max(worst,
                                 std::abs(f.evaluate(c, b, a, acoeff) -
                                          std::conj(f.values[c.pair_index(a, b)][i])));
                for (std::size_t d = 0; d < n; ++d) {
                    const auto& basis2 = c.hom_basis(b, d);
                    for (std::size_t j = 0; j < basis2.size(); ++j) {
                        const auto [pcoeff, pres] = c.expand(a, d, basis[i] * basis2[j]);
                        worst = std::max(worst, pres);
                        const Complex lhs = f.evaluate(c, a, d, pcoeff);
                        const Complex rhs = f.values[c.pair_index(a, b)][i] *
                                            f.values[c.pair_index(b, d)][j];
                        worst = std::max(worst, std::abs(lhs - rhs));
                    }
                }
            }
        }
    }
    return worst;
}

namespace {

// Joint eigenspace decomposition of an abelian *-closed span of matrices.
std::vector<ComplexMatrix> joint_eigenspace_isometries(
    const std::vector<ComplexMatrix>& basis, std::size_t dim, double tol) {
    std::vector<ComplexMatrix> spaces{ComplexMatrix::identity(dim)};
    std::vector<ComplexMatrix> hermitian_parts;
    for (const auto& m : basis) {
        hermitian_parts.push_back((m + m.adjoint()) * Complex(0.5, 0.0));
        hermitian_parts.push_back((m - m.adjoint()) * Complex(0.0, -0.5));
    }
    for (const auto& h : hermitian_parts) {
        std::vector<ComplexMatrix> refined;
        const double scale = 1.0 + h.max_abs();
        for (const auto& v : spaces) {
            const auto compressed = v.adjoint() * h * v;
            const auto eig = hermitian_eig(compressed, 1e-7);
            // clusters in descending eigenvalue order, so the character
            // seeing the first idempotent of a diagonal basis comes first
            std::vector<ComplexMatrix> groups;
            std::size_t start = 0;
            for (std::size_t k = 1; k <= eig.values.size(); ++k) {
                if (k == eig.values.size() ||
                    eig.values[k] - eig.values[k - 1] > 1e-7 * scale) {
                    ComplexMatrix group(v.cols(), k - start);
                    for (std::size_t i = 0; i < v.cols(); ++i)
                        for (std::size_t j = start; j < k; ++j)
                            group(i, j - start) = eig.vectors(i, j);
                    groups.push_back(v * group);
                    start = k;
                }
            }
            for (auto it = groups.rbegin(); it != groups.rend(); ++it)
                refined.push_back(std::move(*it));
        }
        spaces = std::move(refined);
    }
    (void)tol;
    return spaces;
}

Complex cut_scalar(const ComplexMatrix& iso, const ComplexMatrix& m) {
    const auto compressed = iso.adjoint() * m * iso;
    return compressed.trace() / Complex(double(compressed.rows()), 0.0);
}

} // namespace

CategorySpectrum analyze_category(const FiniteCStarCategory& c, double tol) {
    const auto validation = validate_category(c, std::max(tol, 1e-8));
    if (!validation.passed()) {
        std::string which = "?";
        for (const auto& e : validation.entries)
            if (e.status == CheckStatus::Fail) {
                which = e.name;
                break;
            }
        throw PreconditionError("analyze_category requires a valid commutative full "
                                "C*-category; validation failed on '" +
                                which + "'");
    }

    const std::size_t n = c.object_count();
    CategorySpectrum out;
    out.diagonals.resize(n);

    for (std::size_t a = 0; a < n; ++a) {
        const auto spaces =
            joint_eigenspace_isometries(c.hom_basis(a, a), c.hilbert_dims()[a], tol);
        for (const auto& v : spaces) {
            CategorySpectrum::DiagonalCharacter ch;
            ch.projector = v * v.adjoint();
            for (const auto& m : c.hom_basis(a, a)) ch.values.push_back(cut_scalar(v, m));
            out.diagonals[a].push_back(std::move(ch));
        }
    }
    const std::size_t k = out.diagonals[0].size();
    for (std::size_t a = 1; a < n; ++a)
        if (out.diagonals[a].size() != k)
            throw ContractViolation(
                "full commutative category with diagonals of different spectrum size");

    // compatibility bijection along the star tree at object 0:
    // R_{0B}(p) is the unique q with P_0^p C_0B P_B^q != 0
    auto cut_norm = [&](std::size_t a, std::size_t b, std::size_t p, std::size_t q) {
        double s = 0.0;
        for (const auto& x : c.hom_basis(a, b)) {
            const auto cut =
                out.diagonals[a][p].projector * x * out.diagonals[b][q].projector;
            s = std::max(s, cut.frobenius_norm());
        }
        return s;
    };

    std::vector<std::vector<std::size_t>> tree_target(n, std::vector<std::size_t>(k, 0));
    for (std::size_t b = 1; b < n; ++b) {
        for (std::size_t p = 0; p < k; ++p) {
            std::size_t hits = 0, found = 0;
            for (std::size_t q = 0; q < k; ++q)
                if (cut_norm(0, b, p, q) > 1e-8) {
                    ++hits;
                    found = q;
                }
            if (hits != 1)
                throw ContractViolation(
                    "base-point bijection broken between objects 0 and " +
                    std::to_string(b));
            tree_target[b][p] = found;
        }
    }

    for (std::size_t p = 0; p < k; ++p) {
        BaseSpectrumPoint pt;
        pt.character_indices.resize(n);
        pt.character_indices[0] = p;
        for (std::size_t b = 1; b < n; ++b) pt.character_indices[b] = tree_target[b][p];
        out.points.push_back(std::move(pt));
    }

    // canonical functor per base point
    for (std::size_t p = 0; p < k; ++p) {
        const auto& pt = out.points[p];
        std::vector<ComplexMatrix> tree_gen(n);
        tree_gen[0] = out.diagonals[0][pt.character_indices[0]].projector;
        for (std::size_t b = 1; b < n; ++b) {
            const auto& pa = out.diagonals[0][pt.character_indices[0]].projector;
            const auto& pb = out.diagonals[b][pt.character_indices[b]].projector;
            ComplexMatrix gen;
            for (const auto& x : c.hom_basis(0, b)) {
                const auto cut = pa * x * pb;
                if (cut.frobenius_norm() > 1e-8) {
                    gen = cut;
                    break;
                }
            }
            if (gen.empty())
                throw ContractViolation("empty fiber on a tree edge despite fullness");
            const double trp = pb.trace().real();
            const double s = (gen.adjoint() * gen * pb).trace().real() / trp;
            gen = gen * Complex(1.0 / std::sqrt(s), 0.0);
            tree_gen[b] = gen;
        }

        StarFunctor f;
        f.values.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            const auto& qa = out.diagonals[a][pt.character_indices[a]];
            for (std::size_t b = 0; b < n; ++b) {
                const auto& qb = out.diagonals[b][pt.character_indices[b]];
                // representative with omega-value 1: h = tree_gen[a]^* tree_gen[b]
                ComplexMatrix h;
                if (a == 0 && b == 0)
                    h = tree_gen[0];
                else if (a == 0)
                    h = tree_gen[b];
                else if (b == 0)
                    h = tree_gen[a].adjoint();
                else
                    h = tree_gen[a].adjoint() * tree_gen[b];
                const double hnorm2 = std::max((h.adjoint() * h).trace().real(), 1e-300);
                auto& vals = f.values[c.pair_index(a, b)];
                for (const auto& x : c.hom_basis(a, b)) {
                    const auto cut = qa.projector * x * qb.projector;
                    Complex ip = 0.0;
                    for (std::size_t i = 0; i < h.rows(); ++i)
                        for (std::size_t j = 0; j < h.cols(); ++j)
                            ip += std::conj(h(i, j)) * cut(i, j);
                    vals.push_back(ip / hnorm2);
                }
            }
        }
        out.canonical.push_back(out.functors.size());
        out.functors.push_back(f);
        out.functor_class.push_back(p);

        // twisted variants from the canonical functor's own value phases,
        // applied as a unitary natural transformation fixing object 0
        std::vector<Complex> phases;
        for (const auto& vals : f.values)
            for (const auto& v : vals) {
                if (std::abs(v) < 1e-8) continue;
                const Complex ph = v / std::abs(v);
                if (std::abs(ph - Complex(1.0, 0.0)) < 1e-8) continue;
                bool seen = false;
                for (const auto& q : phases)
                    if (std::abs(q - ph) < 1e-8) seen = true;
                if (!seen && phases.size() < 3) phases.push_back(ph);
            }
        for (const auto& ph : phases) {
            StarFunctor tw = f;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    const Complex nua = a == 0 ? Complex(1.0, 0.0) : ph;
                    const Complex nub = b == 0 ? Complex(1.0, 0.0) : ph;
                    for (auto& v : tw.values[c.pair_index(a, b)])
                        v = std::conj(nua) * v * nub;
                }
            out.functors.push_back(std::move(tw));
            out.functor_class.push_back(p);
        }
    }
    return out;
}

std::vector<StarFunctor> enumerate_star_functors(const FiniteCStarCategory& c, double tol) {
    return analyze_category(c, tol).functors;
}

std::vector<BaseSpectrumPoint> base_spectrum(const FiniteCStarCategory& c, double tol) {
    return analyze_category(c, tol).points;
}

ComplexMatrix CategoryFunctor::apply(const FiniteCStarCategory& source,
                                     const FiniteCStarCategory& target, std::size_t a,
                                     std::size_t b, const ComplexMatrix& m) const {
    const auto [coeffs, res] = source.expand(a, b, m);
    if (res > 1e-7) throw DomainError("element not in the source hom-space");
    const auto mapped = hom_maps[source.pair_index(a, b)] * ComplexMatrix::column(coeffs);
    return target.assemble(object_map[a], object_map[b], mapped.vec());
}

CategoryFunctor identity_functor(const FiniteCStarCategory& c) {
    CategoryFunctor f;
    const std::size_t n = c.object_count();
    f.object_map.resize(n);
    for (std::size_t a = 0; a < n; ++a) f.object_map[a] = a;
    f.hom_maps.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            f.hom_maps[c.pair_index(a, b)] = ComplexMatrix::identity(c.hom_dim(a, b));
    return f;
}

Report validate_category_functor(const FiniteCStarCategory& source,
                                 const FiniteCStarCategory& target,
                                 const CategoryFunctor& f, double tol) {
    Report rep;
    rep.subject = "star-functor";
    const std::size_t n = source.object_count();
    if (f.object_map.size() != n || f.hom_maps.size() != n * n)
        throw DimensionError("functor data shape mismatch");

    std::vector<bool> hit(target.object_count(), false);
    bool bij = target.object_count() == n;
    for (auto t : f.object_map) {
        if (t >= target.object_count() || hit[t]) {
            bij = false;
            break;
        }
        hit[t] = true;
    }
    rep.add("object-bijective", bij ? CheckStatus::Pass : CheckStatus::Fail,
            bij ? 0.0 : 1.0);
    if (!bij) return rep;

    double unital = 0.0, invol = 0.0, mult = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const auto ia = ComplexMatrix::identity(source.hilbert_dims()[a]);
        const auto image = f.apply(source, target, a, a, ia);
        unital = std::max(unital,
                          max_abs_diff(image, ComplexMatrix::identity(
                                                  target.hilbert_dims()[f.object_map[a]])));
        for (std::size_t b = 0; b < n; ++b) {
            for (const auto& x : source.hom_basis(a, b)) {
                const auto fx = f.apply(source, target, a, b, x);
                invol = std::max(invol,
                                 max_abs_diff(f.apply(source, target, b, a, x.adjoint()),
                                              fx.adjoint()));
                for (std::size_t d = 0; d < n; ++d)
                    for (const auto& y : source.hom_basis(b, d)) {
                        const auto fy = f.apply(source, target, b, d, y);
                        mult = std::max(
                            mult, max_abs_diff(f.apply(source, target, a, d, x * y),
                                               fx * fy));
                    }
            }
        }
    }
    rep.add_residual("unital", unital, tol);
    rep.add_residual("involutive", invol, tol);
    rep.add_residual("multiplicative", mult, tol);
    return rep;
}

CategoryFunctor compose_functors(const FiniteCStarCategory& a, const FiniteCStarCategory& b,
                                 const FiniteCStarCategory& c, const CategoryFunctor& outer,
                                 const CategoryFunctor& inner) {
    (void)c;
    CategoryFunctor out;
    const std::size_t n = a.object_count();
    out.object_map.resize(n);
    out.hom_maps.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        out.object_map[i] = outer.object_map[inner.object_map[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& inner_map = inner.hom_maps[a.pair_index(i, j)];
            const auto& outer_map =
                outer.hom_maps[b.pair_index(inner.object_map[i], inner.object_map[j])];
            out.hom_maps[a.pair_index(i, j)] = outer_map * inner_map;
        }
    return out;
}

} // namespace ncg
