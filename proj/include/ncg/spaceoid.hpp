#pragma once

// Spaceoids: saturated unital rank-one Fell bundles over the product of a
// finite diagonal space Delta_X and the total equivalence relation on a
// finite object set O. Fibers are stored through structure constants
// relative to chosen unit vectors: e_{AB} e_{BC} = mu e_{AC} and
// (e_{AB})^* = iota e_{BA}, so every bundle axiom is a scalar identity
// checked exhaustively. Gauge freedom (rescaling the unit vectors) is dealt
// with by the transforms, never assumed away in comparisons.

#include <cstddef>
#include <string>
#include <vector>

#include "ncg/cstarcat.hpp"
#include "ncg/matrix.hpp"
#include "ncg/report.hpp"

namespace ncg {

class Spaceoid {
public:
    Spaceoid(std::size_t base_points, std::vector<std::string> objects,
             std::vector<Complex> mu, std::vector<Complex> iota);

    // All structure constants 1.
    static Spaceoid trivial(std::size_t base_points, std::vector<std::string> objects);

    std::size_t base_points() const { return nx_; }
    std::size_t object_count() const { return objects_.size(); }
    const std::vector<std::string>& objects() const { return objects_; }

    // e_{AB} e_{BC} = mu(p, A, B, C) e_{AC}
    Complex mu(std::size_t p, std::size_t a, std::size_t b, std::size_t c) const {
        const std::size_t n = objects_.size();
        return mu_[((p * n + a) * n + b) * n + c];
    }
    // (e_{AB})^* = iota(p, A, B) e_{BA}
    Complex iota(std::size_t p, std::size_t a, std::size_t b) const {
        const std::size_t n = objects_.size();
        return iota_[(p * n + a) * n + b];
    }

    Complex& mu_ref(std::size_t p, std::size_t a, std::size_t b, std::size_t c) {
        const std::size_t n = objects_.size();
        return mu_[((p * n + a) * n + b) * n + c];
    }
    Complex& iota_ref(std::size_t p, std::size_t a, std::size_t b) {
        const std::size_t n = objects_.size();
        return iota_[(p * n + a) * n + b];
    }

private:
    std::size_t nx_ = 0;
    std::vector<std::string> objects_;
    std::vector<Complex> mu_;
    std::vector<Complex> iota_;
};

// Every Fell-bundle axiom from the displayed list, checked exhaustively over
// the finite fiber data; failures name the offending tuple.
Report validate_spaceoid(const Spaceoid& s, double tol = kDefaultTol);

struct GammaSectionsResult {
    FiniteCStarCategory category;
    // operator realization scalars r(p, A, B): the point section of the
    // (A,B) line maps to E_pp * r; r trivializes mu and iota
    std::vector<Complex> r;
    std::size_t base_points = 0;

    Complex r_scalar(std::size_t p, std::size_t a, std::size_t b) const {
        const std::size_t n = category.object_count();
        return r[(p * n + a) * n + b];
    }
};

// The section category Gamma(E): Hom(B, A) = sections over Delta_X x
// {(A,B)}, realized as diagonal operator spaces on C^X.
GammaSectionsResult gamma_sections(const Spaceoid& s, double tol = kDefaultTol);

struct SigmaResult {
    Spaceoid spaceoid;
    CategorySpectrum spectrum; // base points + the canonical functors used
};

// The spectral spaceoid Sigma(C): base points are the base spectrum, fibers
// the one-dimensional quotients C_AB / I_[omega], coordinatized by the
// canonical representative functor (all structure constants become 1).
SigmaResult sigma_spaceoid(const FiniteCStarCategory& c, double tol = kDefaultTol);

// A morphism of spaceoids (f, F): source -> target; F maps the f-pullback
// of the target bundle into the source bundle, one scalar per source base
// point and source object pair.
struct SpaceoidMorphism {
    std::size_t source_points = 0, target_points = 0;
    std::size_t source_objects = 0, target_objects = 0;
    std::vector<std::size_t> base_map;   // X_source -> X_target
    std::vector<std::size_t> object_map; // O_source -> O_target, bijective
    std::vector<Complex> fiber_scalars;  // (p, a, b) over source indices

    Complex fiber(std::size_t p, std::size_t a, std::size_t b) const {
        return fiber_scalars[(p * source_objects + a) * source_objects + b];
    }
    Complex& fiber_ref(std::size_t p, std::size_t a, std::size_t b) {
        return fiber_scalars[(p * source_objects + a) * source_objects + b];
    }
};

SpaceoidMorphism identity_spaceoid_morphism(const Spaceoid& s);

// Base compatibility plus fiberwise *-functoriality of F against the two
// structure-constant systems.
Report validate_spaceoid_morphism(const Spaceoid& source, const Spaceoid& target,
                                  const SpaceoidMorphism& m, double tol = kDefaultTol);

// (g, G) o (f, F) = (g o f, F . f-pullback(G)).
SpaceoidMorphism compose_spaceoid_morphisms(const SpaceoidMorphism& outer,
                                            const SpaceoidMorphism& inner);

struct CategorifiedGelfandResult {
    FiniteCStarCategory section_category; // Gamma(Sigma(c))
    CategoryFunctor transform;            // c -> Gamma(Sigma(c))
    Report report;                        // bijectivity + isometry + functoriality
};

// The horizontally categorified Gel'fand transform x -> (omega -> omega(x)).
CategorifiedGelfandResult gelfand_transform_cat(const FiniteCStarCategory& c,
                                                double tol = kDefaultTol);

struct EvaluationTransformResult {
    Spaceoid double_dual; // Sigma(Gamma(s))
    SpaceoidMorphism morphism;
    Report report; // bijective base map, invertible fibers, *-functoriality
};

// The evaluation transform s -> Sigma(Gamma(s)); an isomorphism of
// spaceoids whose fiber maps absorb all gauge phases.
EvaluationTransformResult evaluation_transform(const Spaceoid& s,
                                               double tol = kDefaultTol);

struct SigmaFunctorResult {
    Spaceoid source;   // Sigma(d)
    Spaceoid target;   // Sigma(c)
    SpaceoidMorphism morphism;
};

// Sigma applied to an object-bijective *-functor phi : c -> d, yielding
// Sigma(d) -> Sigma(c).
SigmaFunctorResult sigma_of_functor(const FiniteCStarCategory& c,
                                    const FiniteCStarCategory& d,
                                    const CategoryFunctor& phi, double tol = kDefaultTol);

struct GammaMorphismResult {
    FiniteCStarCategory source_sections; // Gamma(target bundle)
    FiniteCStarCategory target_sections; // Gamma(source bundle)
    CategoryFunctor functor;             // Gamma(E2) -> Gamma(E1)
};

// Gamma applied to a spaceoid morphism: sigma -> F . f-pullback(sigma).
GammaMorphismResult gamma_of_morphism(const Spaceoid& source, const Spaceoid& target,
                                      const SpaceoidMorphism& m,
                                      double tol = kDefaultTol);

} // namespace ncg
