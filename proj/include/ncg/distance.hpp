#pragma once

// Connes spectral distance between pure states: maximize omega1(x) -
// omega2(x) over self-adjoint x with ||[D, pi(x)]|| <= 1. Restricting to
// self-adjoint x loses nothing: for any x pick the phase with
// |f(x)| = Re(e^{it} f(x)) = f((e^{it}x + e^{-it}x^*)/2), and the symmetrized
// element has commutator norm at most that of x.
//
// Infinite distances are decided exactly up front: the constraint seminorm
// has kernel K = {x : [D, pi(x)] = 0}, and the supremum is infinite iff the
// objective functional does not vanish on K. On the complement the problem
// is a small semidefinite program solved by a damped-Newton log-det barrier
// path following; the barrier parameter gives a certified duality gap.

#include <cmath>
#include <cstddef>
#include <vector>

#include "ncg/algebra.hpp"
#include "ncg/triple.hpp"

namespace ncg {

struct DistanceResult {
    double value = 0.0; // +infinity for the unbounded case
    AlgebraElement optimizer;
    std::size_t iterations = 0;
    // dual bound minus primal value; 0 when the distance is 0 or infinite
    double certified_gap = 0.0;

    bool infinite() const { return std::isinf(value); }
};

DistanceResult connes_distance(const SpectralTriple& t, const PureState& omega1,
                               const PureState& omega2, double tol = 1e-8);

// Exhaustive reference value: grid search over the self-adjoint coordinate
// box [-radius, radius]^d, rejecting points with commutator norm > 1. A
// lower bound on the true distance by construction. Guard: the self-adjoint
// dimension must be at most 6 and the grid at most 2^20 points.
double distance_oracle(const SpectralTriple& t, const PureState& omega1,
                       const PureState& omega2, double grid_radius,
                       std::size_t grid_steps);

struct DistanceMatrix {
    std::vector<PureState> states;
    std::vector<std::vector<DistanceResult>> entries; // symmetric, zero diagonal
};

DistanceMatrix distance_matrix(const SpectralTriple& t, const std::vector<PureState>& states,
                               double tol = 1e-8);

} // namespace ncg
