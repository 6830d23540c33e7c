#include "ncg/distance.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ncg {

namespace {

struct ReducedProblem {
    std::vector<double> objective;          // c on the reduced coordinates
    std::vector<ComplexMatrix> commutators; // N_a = [D, pi(.)] on reduced basis
    ComplexMatrix reduction;                // d x r real matrix, columns orthonormal
};

std::vector<double> real_objective(const std::vector<AlgebraElement>& sa_basis,
                                   const PureState& w1, const PureState& w2) {
    std::vector<double> c(sa_basis.size());
    for (std::size_t a = 0; a < sa_basis.size(); ++a)
        c[a] = (w1.evaluate(sa_basis[a]) - w2.evaluate(sa_basis[a])).real();
    return c;
}

// Realified matrix of the map x -> vec [D, pi(x)] over the self-adjoint
// coordinates (the coordinates themselves are real).
ComplexMatrix commutator_map_matrix(const std::vector<ComplexMatrix>& ms) {
    const std::size_t h2 = ms.front().entries().size();
    ComplexMatrix l(2 * h2, ms.size());
    for (std::size_t a = 0; a < ms.size(); ++a)
        for (std::size_t k = 0; k < h2; ++k) {
            l(k, a) = ms[a].entries()[k].real();
            l(h2 + k, a) = ms[a].entries()[k].imag();
        }
    return l;
}

ComplexMatrix hermitian_inverse(const ComplexMatrix& m) {
    const auto eig = hermitian_eig(m, 1e-6);
    ComplexMatrix s(m.rows(), m.rows());
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        if (eig.values[k] <= 0.0)
            throw ContractViolation("barrier matrix lost positive definiteness");
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.rows(); ++j)
                s(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k)) *
                           Complex(1.0 / eig.values[k], 0.0);
    }
    return s;
}

double min_eig(const ComplexMatrix& m) { return hermitian_eig(m, 1e-6).values.front(); }

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    // tr(a b) without forming the product
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, i);
    return acc;
}

} // namespace

DistanceResult connes_distance(const SpectralTriple& t, const PureState& omega1,
                               const PureState& omega2, double tol) {
    if (omega1.algebra() != t.algebra() || omega2.algebra() != t.algebra())
        throw DomainError("states do not belong to the triple's algebra");
    if (tol <= 0.0) throw PreconditionError("tolerance must be positive");

    const auto sa_basis = t.algebra().selfadjoint_basis();
    const std::size_t d = sa_basis.size();
    const auto c = real_objective(sa_basis, omega1, omega2);
    double cnorm = 0.0;
    for (double v : c) cnorm += v * v;
    cnorm = std::sqrt(cnorm);

    DistanceResult res{0.0, t.algebra().zero(), 0, 0.0};
    if (cnorm <= 1e-14) return res; // omega1 = omega2 as functionals

    std::vector<ComplexMatrix> ms;
    ms.reserve(d);
    for (const auto& b : sa_basis) ms.push_back(commutator(t.dirac(), t.pi(b)));
    const auto lmap = commutator_map_matrix(ms);
    const auto sv = singular_values(lmap);
    const double sv_scale = std::max(1.0, sv.empty() ? 0.0 : sv.front());
    // kernel of the commutator map, singular values below 1e-10 (scaled)
    const double kernel_tol = 1e-10 * sv_scale;
    const auto decomposition = svd(lmap);

    // objective component along the kernel decides infiniteness exactly
    for (std::size_t k = 0; k < decomposition.v.cols(); ++k) {
        const double s = k < decomposition.sigma.size() ? decomposition.sigma[k] : 0.0;
        if (s > kernel_tol) continue;
        Complex ip = 0.0;
        for (std::size_t a = 0; a < d; ++a) ip += decomposition.v(a, k) * c[a];
        if (std::abs(ip) > 1e-9 * (1.0 + cnorm)) {
            res.value = std::numeric_limits<double>::infinity();
            std::vector<Complex> coords(t.algebra().dim(), Complex(0.0, 0.0));
            auto witness = t.algebra().zero();
            for (std::size_t a = 0; a < d; ++a)
                witness = witness + sa_basis[a] * decomposition.v(a, k);
            res.optimizer = witness;
            return res;
        }
    }

    // reduced coordinates: the orthogonal complement of the kernel
    std::vector<std::vector<Complex>> reduced_cols;
    for (std::size_t k = 0; k < decomposition.sigma.size(); ++k) {
        if (decomposition.sigma[k] <= kernel_tol) continue;
        std::vector<Complex> col(d);
        for (std::size_t a = 0; a < d; ++a) col[a] = decomposition.v(a, k);
        reduced_cols.push_back(std::move(col));
    }
    if (reduced_cols.empty()) return res; // D commutes with everything, c = 0 on K
    const auto reduction = from_columns(reduced_cols);
    const std::size_t r = reduction.cols();

    std::vector<double> cr(r, 0.0);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < d; ++b) cr[a] += reduction(b, a).real() * c[b];
    std::vector<ComplexMatrix> nr;
    nr.reserve(r);
    const std::size_t h = t.dim();
    for (std::size_t a = 0; a < r; ++a) {
        ComplexMatrix acc(h, h);
        for (std::size_t b = 0; b < d; ++b) acc = acc + ms[b] * reduction(b, a);
        nr.push_back(std::move(acc));
    }

    // log-det barrier path following on maximize cr . y, M(y)^H M(y) <= I
    const double nu = 2.0 * double(h);
    std::vector<double> y(r, 0.0);
    double tpath = 1.0;
    const double gap_target = std::max(tol * 0.25, 1e-11);
    std::size_t newton_total = 0;

    auto assemble = [&](const std::vector<double>& yy) {
        ComplexMatrix m(h, h);
        for (std::size_t a = 0; a < r; ++a) m = m + nr[a] * yy[a];
        return m;
    };

    const int max_stages = 64;
    for (int stage = 0; stage < max_stages; ++stage) {
        // damped Newton centering for f(y) = -t c.y - logdet(I - M^H M)
        for (int it = 0; it < 80; ++it) {
            ++newton_total;
            const auto m = assemble(y);
            const auto gram = m.adjoint() * m;
            ComplexMatrix amat = ComplexMatrix::identity(h) - gram;
            const auto s = hermitian_inverse(amat);
            std::vector<ComplexMatrix> hs(r); // H_a = N_a^H M + M^H N_a
            for (std::size_t a = 0; a < r; ++a)
                hs[a] = nr[a].adjoint() * m + m.adjoint() * nr[a];
            std::vector<ComplexMatrix> ts(r); // S H_a
            for (std::size_t a = 0; a < r; ++a) ts[a] = s * hs[a];

            std::vector<double> grad(r);
            for (std::size_t a = 0; a < r; ++a)
                grad[a] = -tpath * cr[a] + ts[a].trace().real();

            ComplexMatrix hess(r, r);
            for (std::size_t a = 0; a < r; ++a)
                for (std::size_t b = a; b < r; ++b) {
                    const double curving = trace_of_product(ts[a], ts[b]).real();
                    const double mixing =
                        trace_of_product(s, nr[a].adjoint() * nr[b] +
                                                nr[b].adjoint() * nr[a])
                            .real();
                    hess(a, b) = curving + mixing;
                    hess(b, a) = hess(a, b);
                }

            ComplexMatrix rhs(r, 1);
            for (std::size_t a = 0; a < r; ++a) rhs(a, 0) = -grad[a];
            const auto step = least_squares(hess, rhs, 1e-13);
            double decrement2 = 0.0;
            for (std::size_t a = 0; a < r; ++a)
                decrement2 += -grad[a] * step(a, 0).real();
            if (!(decrement2 > 0.0)) break;

            // backtracking: stay strictly feasible, insist on decrement
            double alpha = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 60; ++bt) {
                std::vector<double> ytry = y;
                for (std::size_t a = 0; a < r; ++a)
                    ytry[a] += alpha * step(a, 0).real();
                const auto mt = assemble(ytry);
                const auto at = ComplexMatrix::identity(h) - mt.adjoint() * mt;
                if (min_eig(at) > 1e-14) {
                    y = ytry;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) break;
            if (decrement2 < 1e-16) break;
        }
        if (nu / tpath < gap_target) break;
        tpath *= 8.0;
    }

    // primal value polished to the boundary of the feasible set
    const auto m_final = assemble(y);
    const double gfin = operator_norm(m_final);
    double inner_value = 0.0;
    for (std::size_t a = 0; a < r; ++a) inner_value += cr[a] * y[a];
    double scale = 1.0;
    if (gfin > 1e-12 && inner_value > 0.0) scale = 1.0 / gfin;
    const double value = inner_value * scale;
    const double dual_bound = inner_value + nu / tpath;

    res.value = value;
    res.iterations = newton_total;
    res.certified_gap = std::max(dual_bound - value, 0.0);
    auto witness = t.algebra().zero();
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < d; ++b)
            witness = witness + sa_basis[b] * (reduction(b, a).real() * y[a] * scale);
    res.optimizer = witness;
    return res;
}

double distance_oracle(const SpectralTriple& t, const PureState& omega1,
                       const PureState& omega2, double grid_radius,
                       std::size_t grid_steps) {
    const auto sa_basis = t.algebra().selfadjoint_basis();
    const std::size_t d = sa_basis.size();
    if (d > 6)
        throw RefusalError("distance_oracle: self-adjoint dimension " + std::to_string(d) +
                           " exceeds the guard (6)");
    if (grid_steps < 2) throw PreconditionError("oracle needs at least 2 grid steps");
    double points = 1.0;
    for (std::size_t a = 0; a < d; ++a) points *= double(grid_steps);
    if (points > double(1 << 20))
        throw RefusalError("distance_oracle: grid too fine for the guard");

    const auto c = real_objective(sa_basis, omega1, omega2);
    std::vector<ComplexMatrix> ms;
    for (const auto& b : sa_basis) ms.push_back(commutator(t.dirac(), t.pi(b)));
    const std::size_t h = t.dim();

    std::vector<std::size_t> idx(d, 0);
    const std::size_t total = std::size_t(points);
    double best = 0.0;
    for (std::size_t n = 0; n < total; ++n) {
        std::size_t rem = n;
        double value = 0.0;
        ComplexMatrix m(h, h);
        for (std::size_t a = 0; a < d; ++a) {
            idx[a] = rem % grid_steps;
            rem /= grid_steps;
            const double coord =
                -grid_radius + 2.0 * grid_radius * double(idx[a]) / double(grid_steps - 1);
            value += c[a] * coord;
            m = m + ms[a] * coord;
        }
        if (operator_norm(m) <= 1.0 + 1e-12) best = std::max(best, std::abs(value));
    }
    return best;
}

DistanceMatrix distance_matrix(const SpectralTriple& t,
                               const std::vector<PureState>& states, double tol) {
    if (states.size() < 2)
        throw PreconditionError("distance_matrix needs at least two states");
    DistanceMatrix out;
    out.states = states;
    const std::size_t n = states.size();
    const DistanceResult zero{0.0, t.algebra().zero(), 0, 0.0};
    out.entries.assign(n, std::vector<DistanceResult>(n, zero));
    // keyed by the index pair, never by evaluation order
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto dij = connes_distance(t, states[i], states[j], tol);
            out.entries[j][i] = dij;
            out.entries[i][j] = std::move(dij);
        }
    return out;
}

} // namespace ncg
