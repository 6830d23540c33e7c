#include "ncg/spaceoid.hpp"

#include <cmath>
#include <string>

namespace ncg {

namespace {

std::string tuple_name(std::size_t p, std::size_t a, std::size_t b) {
    return "(p=" + std::to_string(p) + ",A=" + std::to_string(a) +
           ",B=" + std::to_string(b) + ")";
}

std::string tuple_name(std::size_t p, std::size_t a, std::size_t b, std::size_t c) {
    return "(p=" + std::to_string(p) + ",A=" + std::to_string(a) +
           ",B=" + std::to_string(b) + ",C=" + std::to_string(c) + ")";
}

} // namespace

Spaceoid::Spaceoid(std::size_t base_points, std::vector<std::string> objects,
                   std::vector<Complex> mu, std::vector<Complex> iota)
    : nx_(base_points), objects_(std::move(objects)), mu_(std::move(mu)),
      iota_(std::move(iota)) {
    const std::size_t n = objects_.size();
    if (nx_ == 0 || n == 0) throw DimensionError("spaceoid over an empty base");
    if (mu_.size() != nx_ * n * n * n || iota_.size() != nx_ * n * n)
        throw DimensionError("structure constant table size mismatch");
}

Spaceoid Spaceoid::trivial(std::size_t base_points, std::vector<std::string> objects) {
    const std::size_t n = objects.size();
    return Spaceoid(base_points, std::move(objects),
                    std::vector<Complex>(base_points * n * n * n, Complex(1.0, 0.0)),
                    std::vector<Complex>(base_points * n * n, Complex(1.0, 0.0)));
}

Report validate_spaceoid(const Spaceoid& s, double tol) {
    Report rep;
    rep.subject = "spaceoid";
    const std::size_t nx = s.base_points(), n = s.object_count();

    double units = 0.0, unit_action = 0.0, assoc = 0.0, invol = 0.0, antimult = 0.0,
           diag_star = 0.0, positivity = 0.0;
    std::string assoc_detail, positivity_detail;
    bool saturated = true;

    for (std::size_t p = 0; p < nx; ++p) {
        for (std::size_t a = 0; a < n; ++a) {
            const Complex uaa = s.mu(p, a, a, a);
            // diagonal fibers must contain a unit: mu(AAA) invertible
            if (std::abs(uaa) < 1e-12) {
                units = std::max(units, 1.0);
                continue;
            }
            // the unit acts identically on every composable fiber
            for (std::size_t b = 0; b < n; ++b) {
                unit_action = std::max(unit_action, std::abs(s.mu(p, a, a, b) - uaa));
                unit_action =
                    std::max(unit_action, std::abs(s.mu(p, b, a, a) - uaa));
            }
            // u^* = u on the diagonal
            diag_star = std::max(
                diag_star, std::abs(s.iota(p, a, a) * uaa / std::conj(uaa) -
                                    Complex(1.0, 0.0)));
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                // (e^*)^* = e
                invol = std::max(invol, std::abs(std::conj(s.iota(p, a, b)) *
                                                     s.iota(p, b, a) -
                                                 Complex(1.0, 0.0)));
                // e^* e >= 0 and nonzero (saturation at rank one)
                const Complex pos =
                    s.iota(p, a, b) * s.mu(p, b, a, b) * s.mu(p, b, b, b);
                if (std::abs(pos.imag()) > tol || pos.real() <= tol) {
                    saturated = saturated && std::abs(pos) > tol;
                    if (positivity < std::abs(pos.imag()) + (pos.real() <= 0 ? 1.0 : 0.0)) {
                        positivity =
                            std::abs(pos.imag()) + (pos.real() <= 0 ? 1.0 : 0.0);
                        positivity_detail = tuple_name(p, a, b);
                    }
                }
                for (std::size_t c = 0; c < n; ++c) {
                    // (ef)^* = f^* e^*
                    antimult = std::max(
                        antimult,
                        std::abs(std::conj(s.mu(p, a, b, c)) * s.iota(p, a, c) -
                                 s.iota(p, b, c) * s.iota(p, a, b) * s.mu(p, c, b, a)));
                    for (std::size_t d = 0; d < n; ++d) {
                        const Complex lhs = s.mu(p, b, c, d) * s.mu(p, a, b, d);
                        const Complex rhs = s.mu(p, a, b, c) * s.mu(p, a, c, d);
                        const double res = std::abs(lhs - rhs);
                        if (res > assoc) {
                            assoc = res;
                            assoc_detail = tuple_name(p, a, b, c) + " with D=" +
                                           std::to_string(d);
                        }
                    }
                }
            }
    }

    rep.add_residual("diagonal-units", units, tol);
    rep.add_residual("unit-action", unit_action, tol);
    rep.add("associativity", assoc <= tol ? CheckStatus::Pass : CheckStatus::Fail, assoc,
            assoc <= tol ? "" : "first violation at " + assoc_detail);
    rep.add_residual("involution-involutive", invol, tol);
    rep.add_residual("involution-antimultiplicative", antimult, tol);
    rep.add_residual("diagonal-star", diag_star, tol);
    rep.add("positivity-and-saturation",
            positivity <= tol && saturated ? CheckStatus::Pass : CheckStatus::Fail,
            positivity, positivity <= tol ? "" : "violated at " + positivity_detail);
    // C*-identity: ||e^* e|| = ||e||^2 at rank one is the statement that the
    // positivity scalar equals the squared fiber norm; with the fiber norm
    // defined through that same scalar it reduces to positivity, recorded
    // here explicitly.
    rep.add("cstar-identity", positivity <= tol ? CheckStatus::Pass : CheckStatus::Fail,
            positivity);
    return rep;
}

GammaSectionsResult gamma_sections(const Spaceoid& s, double tol) {
    const auto validation = validate_spaceoid(s, std::max(tol, 1e-8));
    if (!validation.passed())
        throw ContractViolation("gamma_sections needs a valid spaceoid");

    const std::size_t nx = s.base_points(), n = s.object_count();
    // trivialization scalars r(p, A, B) with
    //   r(A,B) r(B,C) = mu(A,B,C) r(A,C)   and
    //   conj(r(A,B)) = iota(A,B) r(B,A)
    std::vector<Complex> r(nx * n * n, Complex(0.0, 0.0));
    auto rr = [&](std::size_t p, std::size_t a, std::size_t b) -> Complex& {
        return r[(p * n + a) * n + b];
    };
    for (std::size_t p = 0; p < nx; ++p) {
        for (std::size_t a = 0; a < n; ++a) rr(p, a, a) = s.mu(p, a, a, a);
        for (std::size_t a = 1; a < n; ++a) {
            const Complex t = s.iota(p, 0, a) * s.mu(p, 0, a, 0) * s.mu(p, 0, 0, 0);
            if (std::abs(t.imag()) > 1e-8 * std::abs(t) || t.real() <= 0.0)
                throw ContractViolation("trivialization scalar not positive at " +
                                        tuple_name(p, 0, a));
            rr(p, 0, a) = std::sqrt(t.real());
            rr(p, a, 0) = std::conj(rr(p, 0, a)) / s.iota(p, 0, a);
        }
        for (std::size_t a = 1; a < n; ++a)
            for (std::size_t b = 1; b < n; ++b) {
                if (a == b) continue;
                const Complex m = s.mu(p, a, 0, b);
                if (std::abs(m) < 1e-12)
                    throw ContractViolation("vanishing composite through the root at " +
                                            tuple_name(p, a, b));
                rr(p, a, b) = rr(p, a, 0) * rr(p, 0, b) / m;
            }
        // the diagonal values must satisfy the same relations; replace the
        // off-root diagonals so the system is exactly consistent
        for (std::size_t a = 1; a < n; ++a) {
            const Complex derived = rr(p, a, 0) * rr(p, 0, a) / s.mu(p, a, 0, a);
            if (std::abs(derived - rr(p, a, a)) > 1e-8 * (1.0 + std::abs(derived)))
                throw ContractViolation("trivialization inconsistent with the diagonal at " +
                                        tuple_name(p, a, a));
        }
    }
    // verify the trivialization identities
    for (std::size_t p = 0; p < nx; ++p)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const double inv_res = std::abs(std::conj(rr(p, a, b)) -
                                                s.iota(p, a, b) * rr(p, b, a));
                if (inv_res > 1e-8 * (1.0 + std::abs(rr(p, a, b))))
                    throw ContractViolation("trivialization breaks the involution at " +
                                            tuple_name(p, a, b));
                for (std::size_t c = 0; c < n; ++c) {
                    const double res =
                        std::abs(rr(p, a, b) * rr(p, b, c) -
                                 s.mu(p, a, b, c) * rr(p, a, c));
                    if (res > 1e-8 * (1.0 + std::abs(rr(p, a, c))))
                        throw ContractViolation("trivialization breaks composition at " +
                                                tuple_name(p, a, b, c));
                }
            }

    // hom bases: point sections as diagonal matrix units scaled by r
    std::vector<std::vector<ComplexMatrix>> homs(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            std::vector<ComplexMatrix> basis;
            for (std::size_t p = 0; p < nx; ++p) {
                ComplexMatrix m(nx, nx);
                m(p, p) = rr(p, a, b);
                basis.push_back(std::move(m));
            }
            homs[a * n + b] = std::move(basis);
        }
    FiniteCStarCategory cat(s.objects(), std::vector<std::size_t>(n, nx),
                            std::move(homs));
    // the section category of a valid spaceoid is commutative and full;
    // re-validate as the construction contract
    const auto catrep = validate_category(cat, std::max(tol, 1e-8));
    if (!catrep.passed())
        throw ContractViolation("section category failed its own validation");
    return GammaSectionsResult{std::move(cat), std::move(r), nx};
}

SigmaResult sigma_spaceoid(const FiniteCStarCategory& c, double tol) {
    auto spectrum = analyze_category(c, tol);
    const std::size_t n = c.object_count();
    const std::size_t points = spectrum.points.size();

    // fibers are the quotients C_AB / I_[omega]; verified one-dimensional by
    // the canonical functor being nonzero on the hom space
    for (std::size_t p = 0; p < points; ++p) {
        const auto& f = spectrum.functors[spectrum.canonical[p]];
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                double peak = 0.0;
                for (const auto& v : f.values[c.pair_index(a, b)])
                    peak = std::max(peak, std::abs(v));
                if (peak < 1e-8)
                    throw ContractViolation(
                        "fiber dimension != 1 at point " + std::to_string(p) + ", pair (" +
                        std::to_string(a) + "," + std::to_string(b) +
                        "): non-full or non-commutative input slipped through");
            }
    }

    // in the canonical coordinates (class with omega-value one as the unit
    // vector) composition and involution have all structure constants 1
    auto out = Spaceoid::trivial(points, c.objects());
    const auto check = validate_spaceoid(out, tol);
    if (!check.passed())
        throw ContractViolation("spectral spaceoid failed the bundle axioms");
    return SigmaResult{std::move(out), std::move(spectrum)};
}

SpaceoidMorphism identity_spaceoid_morphism(const Spaceoid& s) {
    SpaceoidMorphism m;
    m.source_points = m.target_points = s.base_points();
    m.source_objects = m.target_objects = s.object_count();
    m.base_map.resize(s.base_points());
    for (std::size_t p = 0; p < s.base_points(); ++p) m.base_map[p] = p;
    m.object_map.resize(s.object_count());
    for (std::size_t a = 0; a < s.object_count(); ++a) m.object_map[a] = a;
    m.fiber_scalars.assign(s.base_points() * s.object_count() * s.object_count(),
                           Complex(1.0, 0.0));
    return m;
}

Report validate_spaceoid_morphism(const Spaceoid& source, const Spaceoid& target,
                                  const SpaceoidMorphism& m, double tol) {
    Report rep;
    rep.subject = "spaceoid-morphism";
    const std::size_t nx = source.base_points(), n = source.object_count();
    if (m.source_points != nx || m.source_objects != n ||
        m.target_points != target.base_points() ||
        m.target_objects != target.object_count() || m.base_map.size() != nx ||
        m.object_map.size() != n)
        throw DimensionError("spaceoid morphism shape mismatch");

    bool base_ok = true;
    for (auto q : m.base_map) base_ok = base_ok && q < target.base_points();
    rep.add("base-map-valid", base_ok ? CheckStatus::Pass : CheckStatus::Fail,
            base_ok ? 0.0 : 1.0);

    std::vector<bool> hit(target.object_count(), false);
    bool obj_bij = target.object_count() == n;
    for (auto t : m.object_map) {
        if (t >= target.object_count() || hit[t]) {
            obj_bij = false;
            break;
        }
        hit[t] = true;
    }
    rep.add("object-bijective", obj_bij ? CheckStatus::Pass : CheckStatus::Fail,
            obj_bij ? 0.0 : 1.0);
    if (!base_ok || !obj_bij) return rep;

    double unital = 0.0, mult = 0.0, invol = 0.0;
    for (std::size_t p = 0; p < nx; ++p) {
        const std::size_t q = m.base_map[p];
        for (std::size_t a = 0; a < n; ++a) {
            const std::size_t fa = m.object_map[a];
            // F sends the target diagonal unit to the source diagonal unit
            unital = std::max(unital,
                              std::abs(m.fiber(p, a, a) * source.mu(p, a, a, a) -
                                       target.mu(q, fa, fa, fa)));
            for (std::size_t b = 0; b < n; ++b) {
                const std::size_t fb = m.object_map[b];
                invol = std::max(
                    invol, std::abs(target.iota(q, fa, fb) * m.fiber(p, b, a) -
                                    std::conj(m.fiber(p, a, b)) * source.iota(p, a, b)));
                for (std::size_t cc = 0; cc < n; ++cc) {
                    const std::size_t fc = m.object_map[cc];
                    mult = std::max(
                        mult,
                        std::abs(m.fiber(p, a, b) * m.fiber(p, b, cc) *
                                     source.mu(p, a, b, cc) -
                                 target.mu(q, fa, fb, fc) * m.fiber(p, a, cc)));
                }
            }
        }
    }
    rep.add_residual("fiber-unital", unital, tol);
    rep.add_residual("fiber-multiplicative", mult, tol);
    rep.add_residual("fiber-involutive", invol, tol);
    return rep;
}

SpaceoidMorphism compose_spaceoid_morphisms(const SpaceoidMorphism& outer,
                                            const SpaceoidMorphism& inner) {
    if (inner.target_points != outer.source_points ||
        inner.target_objects != outer.source_objects)
        throw DimensionError("spaceoid morphism composition mismatch");
    SpaceoidMorphism m;
    m.source_points = inner.source_points;
    m.source_objects = inner.source_objects;
    m.target_points = outer.target_points;
    m.target_objects = outer.target_objects;
    m.base_map.resize(inner.source_points);
    for (std::size_t p = 0; p < inner.source_points; ++p)
        m.base_map[p] = outer.base_map[inner.base_map[p]];
    m.object_map.resize(inner.source_objects);
    for (std::size_t a = 0; a < inner.source_objects; ++a)
        m.object_map[a] = outer.object_map[inner.object_map[a]];
    m.fiber_scalars.assign(m.source_points * m.source_objects * m.source_objects,
                           Complex(0.0, 0.0));
    for (std::size_t p = 0; p < m.source_points; ++p)
        for (std::size_t a = 0; a < m.source_objects; ++a)
            for (std::size_t b = 0; b < m.source_objects; ++b)
                m.fiber_ref(p, a, b) =
                    inner.fiber(p, a, b) *
                    outer.fiber(inner.base_map[p], inner.object_map[a],
                                inner.object_map[b]);
    return m;
}

CategorifiedGelfandResult gelfand_transform_cat(const FiniteCStarCategory& c, double tol) {
    auto sigma = sigma_spaceoid(c, tol);
    auto gamma = gamma_sections(sigma.spaceoid, tol);
    const std::size_t n = c.object_count();
    const std::size_t points = sigma.spaceoid.base_points();

    CategoryFunctor f;
    f.object_map.resize(n);
    for (std::size_t a = 0; a < n; ++a) f.object_map[a] = a;
    f.hom_maps.resize(n * n);

    Report rep;
    rep.subject = "categorified-gelfand-transform";
    double iso_res = 0.0;
    bool bijective = true;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t dim = c.hom_dim(a, b);
            ComplexMatrix map(points, dim);
            for (std::size_t p = 0; p < points; ++p) {
                const auto& omega = sigma.spectrum.functors[sigma.spectrum.canonical[p]];
                for (std::size_t i = 0; i < dim; ++i)
                    map(p, i) = omega.values[c.pair_index(a, b)][i];
            }
            // hat(x) as an operator is diag_p(omega_p(x)); with the trivial
            // spectral spaceoid the target point sections are exactly E_pp
            f.hom_maps[c.pair_index(a, b)] = map;
            if (dim != points || matrix_rank(map, 1e-8) != std::min(dim, points))
                bijective = false;
            // isometry on every basis arrow
            for (std::size_t i = 0; i < dim; ++i) {
                const double lhs = operator_norm(c.hom_basis(a, b)[i]);
                double rhs = 0.0;
                for (std::size_t p = 0; p < points; ++p)
                    rhs = std::max(rhs, std::abs(map(p, i)));
                iso_res = std::max(iso_res, std::abs(lhs - rhs));
            }
        }
    rep.add("hom-space-bijective", bijective ? CheckStatus::Pass : CheckStatus::Fail,
            bijective ? 0.0 : 1.0);
    rep.add_residual("isometric", iso_res, std::max(tol, 1e-9));
    rep.merge(validate_category_functor(c, gamma.category, f, std::max(tol, 1e-8)),
              "functor/");
    return CategorifiedGelfandResult{std::move(gamma.category), std::move(f),
                                     std::move(rep)};
}

EvaluationTransformResult evaluation_transform(const Spaceoid& s, double tol) {
    auto gamma = gamma_sections(s, tol);
    auto sigma = sigma_spaceoid(gamma.category, tol);
    const std::size_t nx = s.base_points(), n = s.object_count();

    Report rep;
    rep.subject = "evaluation-transform";

    SpaceoidMorphism m;
    m.source_points = nx;
    m.source_objects = n;
    m.target_points = sigma.spaceoid.base_points();
    m.target_objects = n;
    m.base_map.assign(nx, 0);
    m.object_map.resize(n);
    for (std::size_t a = 0; a < n; ++a) m.object_map[a] = a;
    m.fiber_scalars.assign(nx * n * n, Complex(0.0, 0.0));

    // eta_Delta: p -> the class of (gamma o ev_p), identified by its
    // diagonal characters: on C_AA = span{E_qq r_q(A,A)} the evaluation
    // character at p reads the (p,p) matrix entry
    bool base_bijective = sigma.spaceoid.base_points() == nx;
    std::vector<bool> used(sigma.spaceoid.base_points(), false);
    for (std::size_t p = 0; p < nx && base_bijective; ++p) {
        std::size_t match = sigma.spaceoid.base_points();
        for (std::size_t q = 0; q < sigma.spaceoid.base_points(); ++q) {
            const auto& chi =
                sigma.spectrum
                    .diagonals[0][sigma.spectrum.points[q].character_indices[0]];
            // chi.values live on the basis {E_qq r_q(0,0)}; the p-evaluation
            // character has value r_p(0,0) at index p and zero elsewhere
            bool ok = true;
            for (std::size_t i = 0; i < nx; ++i) {
                const Complex expect =
                    i == p ? gamma.r_scalar(p, 0, 0) : Complex(0.0, 0.0);
                if (std::abs(chi.values[i] - expect) > 1e-7 * (1.0 + std::abs(expect))) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                match = q;
                break;
            }
        }
        if (match == sigma.spaceoid.base_points() || used[match]) {
            base_bijective = false;
            break;
        }
        used[match] = true;
        m.base_map[p] = match;
    }
    rep.add("base-map-bijective", base_bijective ? CheckStatus::Pass : CheckStatus::Fail,
            base_bijective ? 0.0 : 1.0);
    if (!base_bijective)
        return EvaluationTransformResult{std::move(sigma.spaceoid), std::move(m),
                                         std::move(rep)};

    // fiber maps: the class of a section sigma at the point [gamma o ev_p]
    // goes to sigma^{AB}_p; on the canonical coordinates the scalar is
    // z_p(sigma) / omega(sigma) for any section with omega(sigma) != 0
    bool fibers_invertible = true;
    for (std::size_t p = 0; p < nx; ++p) {
        const auto& omega = sigma.spectrum.functors[sigma.spectrum.canonical[m.base_map[p]]];
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                // use the delta_p section: operator E_pp r_p(a,b), section
                // coordinate z_p = 1
                const Complex v =
                    omega.values[gamma.category.pair_index(a, b)][p];
                if (std::abs(v) < 1e-10) {
                    fibers_invertible = false;
                    continue;
                }
                m.fiber_ref(p, a, b) = Complex(1.0, 0.0) / v;
            }
    }
    rep.add("fiber-maps-invertible",
            fibers_invertible ? CheckStatus::Pass : CheckStatus::Fail,
            fibers_invertible ? 0.0 : 1.0);

    rep.merge(validate_spaceoid_morphism(s, sigma.spaceoid, m, std::max(tol, 1e-8)),
              "morphism/");
    return EvaluationTransformResult{std::move(sigma.spaceoid), std::move(m),
                                     std::move(rep)};
}

SigmaFunctorResult sigma_of_functor(const FiniteCStarCategory& c,
                                    const FiniteCStarCategory& d,
                                    const CategoryFunctor& phi, double tol) {
    const auto check = validate_category_functor(c, d, phi, std::max(tol, 1e-8));
    if (!check.passed())
        throw PreconditionError("sigma_of_functor needs a verified object-bijective "
                                "*-functor");
    auto sc = sigma_spaceoid(c, tol);
    auto sd = sigma_spaceoid(d, tol);
    const std::size_t n = c.object_count();

    // inverse object map
    std::vector<std::size_t> inv(n, 0);
    for (std::size_t a = 0; a < n; ++a) inv[phi.object_map[a]] = a;

    SpaceoidMorphism m;
    m.source_points = sd.spaceoid.base_points();
    m.source_objects = n;
    m.target_points = sc.spaceoid.base_points();
    m.target_objects = n;
    m.object_map = inv;
    m.base_map.assign(m.source_points, 0);
    m.fiber_scalars.assign(m.source_points * n * n, Complex(0.0, 0.0));

    for (std::size_t q = 0; q < m.source_points; ++q) {
        const auto& omega = sd.spectrum.functors[sd.spectrum.canonical[q]];
        // omega o Phi: its diagonal values on C_aa bases of c
        std::size_t match = m.target_points;
        for (std::size_t p = 0; p < m.target_points && match == m.target_points; ++p) {
            bool ok = true;
            for (std::size_t a = 0; a < n && ok; ++a) {
                const auto& chi =
                    sc.spectrum.diagonals[a][sc.spectrum.points[p].character_indices[a]];
                for (std::size_t i = 0; i < c.hom_dim(a, a) && ok; ++i) {
                    const auto image =
                        phi.apply(c, d, a, a, c.hom_basis(a, a)[i]);
                    const auto [coeffs, res] =
                        d.expand(phi.object_map[a], phi.object_map[a], image);
                    const Complex val = omega.evaluate(d, phi.object_map[a],
                                                       phi.object_map[a], coeffs);
                    (void)res;
                    if (std::abs(val - chi.values[i]) > 1e-7 * (1.0 + std::abs(val)))
                        ok = false;
                }
            }
            if (ok) match = p;
        }
        if (match == m.target_points)
            throw ContractViolation("pulled-back functor matches no base point");
        m.base_map[q] = match;

        // fiber scalars: class of x at the target point -> class of Phi(x)
        const auto& omega_c = sc.spectrum.functors[sc.spectrum.canonical[match]];
        for (std::size_t a2 = 0; a2 < n; ++a2)
            for (std::size_t b2 = 0; b2 < n; ++b2) {
                const std::size_t a = inv[a2], b = inv[b2];
                // pick a hom basis element of C_ab with nonzero omega_c value
                Complex scalar(0.0, 0.0);
                for (std::size_t i = 0; i < c.hom_dim(a, b); ++i) {
                    const Complex denom = omega_c.values[c.pair_index(a, b)][i];
                    if (std::abs(denom) < 1e-8) continue;
                    const auto image = phi.apply(c, d, a, b, c.hom_basis(a, b)[i]);
                    const auto [coeffs, res] = d.expand(a2, b2, image);
                    (void)res;
                    scalar = omega.evaluate(d, a2, b2, coeffs) / denom;
                    break;
                }
                m.fiber_ref(q, a2, b2) = scalar;
            }
    }
    return SigmaFunctorResult{std::move(sd.spaceoid), std::move(sc.spaceoid),
                              std::move(m)};
}

GammaMorphismResult gamma_of_morphism(const Spaceoid& source, const Spaceoid& target,
                                      const SpaceoidMorphism& m, double tol) {
    const auto check = validate_spaceoid_morphism(source, target, m, std::max(tol, 1e-8));
    if (!check.passed())
        throw PreconditionError("gamma_of_morphism needs a valid spaceoid morphism");
    auto gsrc = gamma_sections(source, tol); // Gamma(E1)
    auto gtgt = gamma_sections(target, tol); // Gamma(E2)

    const std::size_t n1 = source.object_count();
    // functor Gamma(E2) -> Gamma(E1): objects via the inverse bijection
    std::vector<std::size_t> inv(n1, 0);
    for (std::size_t a = 0; a < n1; ++a) inv[m.object_map[a]] = a;

    CategoryFunctor f;
    f.object_map = inv;
    f.hom_maps.resize(n1 * n1);
    for (std::size_t a2 = 0; a2 < n1; ++a2)
        for (std::size_t b2 = 0; b2 < n1; ++b2) {
            const std::size_t a1 = inv[a2], b1 = inv[b2];
            // section coefficients z over X2 -> p |-> F_p z_{f(p)}; the
            // point-section bases make basis coefficients and section
            // coordinates literally the same numbers on both sides
            ComplexMatrix map(source.base_points(), target.base_points());
            for (std::size_t p = 0; p < source.base_points(); ++p)
                map(p, m.base_map[p]) = m.fiber(p, a1, b1);
            f.hom_maps[gtgt.category.pair_index(a2, b2)] = map;
        }
    return GammaMorphismResult{std::move(gtgt.category), std::move(gsrc.category),
                               std::move(f)};
}

} // namespace ncg
