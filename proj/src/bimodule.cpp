#include "ncg/bimodule.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace ncg {

HilbertBimodule::HilbertBimodule(std::size_t left_blocks, std::size_t right_blocks,
                                 std::vector<BimoduleComponent> components)
    : m_(left_blocks), n_(right_blocks), comps_(std::move(components)) {
    if (m_ == 0 || n_ == 0) throw DimensionError("bimodule over empty algebra");
    std::vector<std::vector<bool>> seen(m_, std::vector<bool>(n_, false));
    std::size_t total = 0;
    for (const auto& c : comps_) {
        if (c.i >= m_ || c.j >= n_) throw DimensionError("component index out of range");
        if (seen[c.i][c.j]) throw DimensionError("duplicate component cell");
        seen[c.i][c.j] = true;
        if (c.dim() == 0) throw DimensionError("stored component of dimension zero");
        if (c.basis.rows() < c.dim())
            throw DimensionError("component basis has fewer ambient rows than columns");
        // basis vectors must be linearly independent: Gram positive definite
        const auto eig = hermitian_eig(c.gram());
        if (eig.values.front() <= 1e-12 * (1.0 + eig.values.back()))
            throw ContractViolation("component basis is degenerate");
        total += c.dim();
    }
    if (total == 0) throw ContractViolation("bimodule with zero total dimension");
}

HilbertBimodule HilbertBimodule::identity(std::size_t n) {
    std::vector<std::size_t> sigma(n);
    for (std::size_t i = 0; i < n; ++i) sigma[i] = i;
    return line_bimodule(sigma, std::vector<Complex>(n, Complex(1.0, 0.0)));
}

HilbertBimodule HilbertBimodule::line_bimodule(const std::vector<std::size_t>& sigma,
                                               const std::vector<Complex>& phases) {
    const std::size_t n = sigma.size();
    if (phases.size() != n) throw DimensionError("one phase per point required");
    std::vector<BimoduleComponent> comps;
    for (std::size_t i = 0; i < n; ++i) {
        if (sigma[i] >= n) throw DimensionError("permutation entry out of range");
        if (std::abs(std::abs(phases[i]) - 1.0) > 1e-12)
            throw ContractViolation("fiber generator must be a unit phase");
        ComplexMatrix basis(1, 1);
        basis(0, 0) = phases[i];
        comps.push_back({i, sigma[i], basis});
    }
    return HilbertBimodule(n, n, std::move(comps));
}

FiniteCStarAlgebra HilbertBimodule::left_algebra() const {
    return FiniteCStarAlgebra(std::vector<std::size_t>(m_, 1));
}

FiniteCStarAlgebra HilbertBimodule::right_algebra() const {
    return FiniteCStarAlgebra(std::vector<std::size_t>(n_, 1));
}

std::optional<std::size_t> HilbertBimodule::component_at(std::size_t i, std::size_t j) const {
    for (std::size_t k = 0; k < comps_.size(); ++k)
        if (comps_[k].i == i && comps_[k].j == j) return k;
    return std::nullopt;
}

std::size_t HilbertBimodule::component_dim(std::size_t i, std::size_t j) const {
    const auto k = component_at(i, j);
    return k ? comps_[*k].dim() : 0;
}

std::size_t HilbertBimodule::total_dim() const {
    std::size_t t = 0;
    for (const auto& c : comps_) t += c.dim();
    return t;
}

BimoduleElement HilbertBimodule::zero_element() const {
    std::vector<std::vector<Complex>> coords;
    for (const auto& c : comps_) coords.emplace_back(c.dim(), Complex(0.0, 0.0));
    return BimoduleElement(*this, std::move(coords));
}

BimoduleElement HilbertBimodule::basis_element(std::size_t k, std::size_t c) const {
    auto e = zero_element();
    auto coords = e.coords();
    coords[k][c] = 1.0;
    return BimoduleElement(*this, std::move(coords));
}

std::vector<BimoduleElement> HilbertBimodule::basis() const {
    std::vector<BimoduleElement> out;
    for (std::size_t k = 0; k < comps_.size(); ++k)
        for (std::size_t c = 0; c < comps_[k].dim(); ++c) out.push_back(basis_element(k, c));
    return out;
}

HilbertBimodule HilbertBimodule::transform_components(
    const std::vector<ComplexMatrix>& u) const {
    if (u.size() != comps_.size()) throw DimensionError("one transform per component");
    std::vector<BimoduleComponent> out = comps_;
    for (std::size_t k = 0; k < comps_.size(); ++k) {
        if (u[k].rows() != comps_[k].dim() || u[k].cols() != comps_[k].dim())
            throw DimensionError("component transform shape mismatch");
        out[k].basis = comps_[k].basis * u[k];
    }
    return HilbertBimodule(m_, n_, std::move(out));
}

bool HilbertBimodule::is_symmetric(double tol) const {
    (void)tol;
    if (m_ != n_)
        throw DomainError("symmetric bimodule test requires equal left/right algebras");
    for (const auto& c : comps_)
        if (c.i != c.j) return false;
    return true;
}

BimoduleElement::BimoduleElement(const HilbertBimodule& parent,
                                 std::vector<std::vector<Complex>> coords)
    : parent_(&parent), coords_(std::move(coords)) {
    if (coords_.size() != parent.components().size())
        throw DimensionError("element coordinate groups mismatch");
    for (std::size_t k = 0; k < coords_.size(); ++k)
        if (coords_[k].size() != parent.components()[k].dim())
            throw DimensionError("element coordinate length mismatch");
}

BimoduleElement BimoduleElement::operator+(const BimoduleElement& o) const {
    auto c = coords_;
    for (std::size_t k = 0; k < c.size(); ++k)
        for (std::size_t t = 0; t < c[k].size(); ++t) c[k][t] += o.coords_[k][t];
    return BimoduleElement(*parent_, std::move(c));
}

BimoduleElement BimoduleElement::operator*(Complex s) const {
    auto c = coords_;
    for (auto& group : c)
        for (auto& z : group) z *= s;
    return BimoduleElement(*parent_, std::move(c));
}

BimoduleElement BimoduleElement::left_action(const AlgebraElement& a) const {
    auto c = coords_;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const Complex s = a.scalar(parent_->components()[k].i);
        for (auto& z : c[k]) z *= s;
    }
    return BimoduleElement(*parent_, std::move(c));
}

BimoduleElement BimoduleElement::right_action(const AlgebraElement& b) const {
    auto c = coords_;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const Complex s = b.scalar(parent_->components()[k].j);
        for (auto& z : c[k]) z *= s;
    }
    return BimoduleElement(*parent_, std::move(c));
}

namespace {

Complex component_pairing(const BimoduleComponent& comp, const std::vector<Complex>& xc,
                          const std::vector<Complex>& yc) {
    // <x, y> with the Gram metric, linear in y.
    const auto g = comp.gram();
    Complex acc = 0.0;
    for (std::size_t p = 0; p < xc.size(); ++p)
        for (std::size_t q = 0; q < yc.size(); ++q) acc += std::conj(xc[p]) * g(p, q) * yc[q];
    return acc;
}

} // namespace

AlgebraElement left_inner(const BimoduleElement& x, const BimoduleElement& y) {
    const auto& m = x.parent();
    auto out = m.left_algebra().zero();
    for (std::size_t k = 0; k < m.components().size(); ++k) {
        const auto& comp = m.components()[k];
        // linear in x: <y, x>_std per component
        out.block(comp.i)(0, 0) += component_pairing(comp, y.coords()[k], x.coords()[k]);
    }
    return out;
}

AlgebraElement right_inner(const BimoduleElement& x, const BimoduleElement& y) {
    const auto& m = x.parent();
    auto out = m.right_algebra().zero();
    for (std::size_t k = 0; k < m.components().size(); ++k) {
        const auto& comp = m.components()[k];
        out.block(comp.j)(0, 0) += component_pairing(comp, x.coords()[k], y.coords()[k]);
    }
    return out;
}

namespace {

std::vector<Complex> flatten_coords(const BimoduleElement& e) {
    std::vector<Complex> out;
    for (const auto& group : e.coords())
        for (const auto& z : group) out.push_back(z);
    return out;
}

BimoduleElement element_from_flat(const HilbertBimodule& m, const std::vector<Complex>& v) {
    std::vector<std::vector<Complex>> coords;
    std::size_t k = 0;
    for (const auto& comp : m.components()) {
        std::vector<Complex> group(comp.dim());
        for (auto& z : group) z = v[k++];
        coords.push_back(std::move(group));
    }
    return BimoduleElement(m, std::move(coords));
}

} // namespace

double module_morphism_residual(const HilbertBimodule& source,
                                const HilbertBimodule& target,
                                const ModuleMorphismPair& p) {
    if (p.map.rows() != target.total_dim() || p.map.cols() != source.total_dim())
        throw DimensionError("module morphism map shape mismatch");
    if (p.phi.source() != source.left_algebra() ||
        p.phi.target() != target.left_algebra())
        throw DimensionError("module morphism joins the wrong algebras");

    auto apply = [&](const BimoduleElement& x) {
        const auto v = p.map.apply(flatten_coords(x));
        return element_from_flat(target, v);
    };
    double worst = 0.0;
    for (const auto& x : source.basis()) {
        const auto fx = apply(x);
        for (std::size_t i = 0; i < source.left_blocks(); ++i) {
            const auto a = source.left_algebra().block_idempotent(i);
            const auto lhs = flatten_coords(apply(x.left_action(a)));
            const auto rhs = flatten_coords(fx.left_action(p.phi.apply(a)));
            for (std::size_t k = 0; k < lhs.size(); ++k)
                worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
        }
    }
    return worst;
}

bool is_full(const HilbertBimodule& m, ModuleSide side, double tol) {
    const auto basis = m.basis();
    const std::size_t alg_dim = side == ModuleSide::Left ? m.left_blocks() : m.right_blocks();
    std::vector<std::vector<Complex>> cols;
    for (const auto& x : basis)
        for (const auto& y : basis) {
            const auto v = side == ModuleSide::Left ? left_inner(x, y) : right_inner(x, y);
            cols.push_back(v.coords());
        }
    if (cols.empty()) return false;
    return matrix_rank(from_columns(cols), tol) == alg_dim;
}

bool is_imprimitivity(const HilbertBimodule& m, double tol) {
    if (!is_full(m, ModuleSide::Left, tol) || !is_full(m, ModuleSide::Right, tol))
        return false;
    const auto basis = m.basis();
    for (const auto& x : basis)
        for (const auto& y : basis)
            for (const auto& z : basis) {
                const auto lhs = z.left_action(left_inner(x, y));
                const auto rhs = x.right_action(right_inner(y, z));
                double res = 0.0;
                for (std::size_t k = 0; k < lhs.coords().size(); ++k)
                    for (std::size_t t = 0; t < lhs.coords()[k].size(); ++t)
                        res = std::max(res,
                                       std::abs(lhs.coords()[k][t] - rhs.coords()[k][t]));
                if (res > tol) return false;
            }
    return true;
}

SpectralDecompositionResult spectral_decomposition(const HilbertBimodule& m, double tol) {
    if (!is_imprimitivity(m, tol))
        throw ContractViolation("spectral_decomposition requires an imprimitivity bimodule");

    const std::size_t n = m.left_blocks();
    if (m.right_blocks() != n)
        throw ContractViolation("imprimitivity over C^m-C^n forces m = n");

    std::vector<std::size_t> sigma(n);
    std::vector<std::vector<Complex>> fibers;
    std::vector<Complex> phases(n, Complex(1.0, 0.0));
    std::vector<double> scales(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t hits = 0, jfound = 0;
        for (std::size_t j = 0; j < m.right_blocks(); ++j) {
            if (m.component_dim(i, j) > 0) {
                ++hits;
                jfound = j;
            }
        }
        if (hits != 1 || m.component_dim(i, jfound) != 1)
            throw ContractViolation(
                "imprimitivity check passed but the line structure is broken at row " +
                std::to_string(i));
        sigma[i] = jfound;
        const auto& comp = m.components()[*m.component_at(i, jfound)];
        // image of the first (only) standard basis vector
        std::vector<Complex> v(comp.basis.rows());
        double norm2 = 0.0;
        for (std::size_t r = 0; r < v.size(); ++r) {
            v[r] = comp.basis(r, 0);
            norm2 += std::norm(v[r]);
        }
        const double norm = std::sqrt(norm2);
        Complex rot(1.0, 0.0);
        for (const auto& z : v)
            if (std::abs(z) > 1e-12 * norm) {
                rot = std::conj(z / std::abs(z));
                break;
            }
        for (auto& z : v) z = z * rot / norm;
        fibers.push_back(std::move(v));
        phases[i] = rot;
        scales[i] = norm;
    }

    auto reconstruction =
        HilbertBimodule::line_bimodule(sigma, std::vector<Complex>(n, Complex(1.0, 0.0)));
    SpectralDecompositionResult out{std::move(sigma), std::move(fibers),
                                    std::move(reconstruction), {}, 0.0};
    // Coordinate isomorphism input -> reconstruction: x |-> scale * phase * x,
    // an isometry because the input gram is scale^2.
    out.iso_scalars.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.iso_scalars[i] = scales[i] * phases[i];

    // Transport both inner products through the isomorphism and compare.
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = *m.component_at(i, out.sigma[i]);
        const auto x = m.basis_element(k, 0);
        const Complex xx = left_inner(x, x).scalar(i);
        const Complex yy = right_inner(x, x).scalar(out.sigma[i]);
        const Complex mapped = out.iso_scalars[i] * std::conj(out.iso_scalars[i]);
        res = std::max(res, std::abs(xx - mapped));
        res = std::max(res, std::abs(yy - mapped));
    }
    out.residual = res;
    if (res > tol)
        throw ContractViolation("reconstruction isomorphism residual " + std::to_string(res));
    return out;
}

std::vector<std::size_t> module_to_bundle(const HilbertBimodule& m) {
    if (m.right_blocks() != 1)
        throw DomainError("module_to_bundle expects a left module (right algebra C)");
    std::vector<std::size_t> fibers(m.left_blocks(), 0);
    for (std::size_t i = 0; i < m.left_blocks(); ++i) fibers[i] = m.component_dim(i, 0);
    return fibers;
}

HilbertBimodule tensor_product(const HilbertBimodule& m1, const HilbertBimodule& m2) {
    if (m1.right_blocks() != m2.left_blocks())
        throw DimensionError("tensor product: inner algebras do not match");
    std::vector<BimoduleComponent> comps;
    for (std::size_t i = 0; i < m1.left_blocks(); ++i) {
        for (std::size_t k = 0; k < m2.right_blocks(); ++k) {
            // ambient = direct sum over j of amb1 * amb2
            std::size_t ambient = 0, dim = 0;
            for (std::size_t j = 0; j < m1.right_blocks(); ++j) {
                const auto c1 = m1.component_at(i, j);
                const auto c2 = m2.component_at(j, k);
                if (!c1 || !c2) continue;
                ambient += m1.components()[*c1].basis.rows() *
                           m2.components()[*c2].basis.rows();
                dim += m1.components()[*c1].dim() * m2.components()[*c2].dim();
            }
            if (dim == 0) continue;
            ComplexMatrix basis(ambient, dim);
            std::size_t row0 = 0, col = 0;
            for (std::size_t j = 0; j < m1.right_blocks(); ++j) {
                const auto c1 = m1.component_at(i, j);
                const auto c2 = m2.component_at(j, k);
                if (!c1 || !c2) continue;
                const auto& b1 = m1.components()[*c1].basis;
                const auto& b2 = m2.components()[*c2].basis;
                for (std::size_t p = 0; p < b1.cols(); ++p)
                    for (std::size_t q = 0; q < b2.cols(); ++q) {
                        for (std::size_t r1 = 0; r1 < b1.rows(); ++r1)
                            for (std::size_t r2 = 0; r2 < b2.rows(); ++r2)
                                basis(row0 + r1 * b2.rows() + r2, col) = b1(r1, p) * b2(r2, q);
                        ++col;
                    }
                row0 += b1.rows() * b2.rows();
            }
            comps.push_back({i, k, std::move(basis)});
        }
    }
    return HilbertBimodule(m1.left_blocks(), m2.right_blocks(), std::move(comps));
}

ComplexMatrix associator_permutation(const HilbertBimodule& x, const HilbertBimodule& y,
                                     const HilbertBimodule& z, std::size_t i,
                                     std::size_t l) {
    // Valid paths (j, k, c1, c2, c3) through x_{ij}, y_{jk}, z_{kl}.
    struct Path {
        std::size_t j, k, c1, c2, c3;
    };
    std::vector<Path> paths;
    for (std::size_t j = 0; j < x.right_blocks(); ++j)
        for (std::size_t k = 0; k < y.right_blocks(); ++k) {
            const auto cx = x.component_at(i, j);
            const auto cy = y.component_at(j, k);
            const auto cz = z.component_at(k, l);
            if (!cx || !cy || !cz) continue;
            for (std::size_t c1 = 0; c1 < x.components()[*cx].dim(); ++c1)
                for (std::size_t c2 = 0; c2 < y.components()[*cy].dim(); ++c2)
                    for (std::size_t c3 = 0; c3 < z.components()[*cz].dim(); ++c3)
                        paths.push_back({j, k, c1, c2, c3});
        }
    const std::size_t d = paths.size();
    // Left bracketing ((x y) z) orders coordinates by (k, j, c1, c2, c3);
    // right bracketing (x (y z)) by (j, c1, k, c2, c3).
    auto positions = [&](bool left) {
        std::vector<std::size_t> order(d);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& pa = paths[a];
            const auto& pb = paths[b];
            const auto ka = left ? std::array<std::size_t, 5>{pa.k, pa.j, pa.c1, pa.c2, pa.c3}
                                 : std::array<std::size_t, 5>{pa.j, pa.c1, pa.k, pa.c2, pa.c3};
            const auto kb = left ? std::array<std::size_t, 5>{pb.k, pb.j, pb.c1, pb.c2, pb.c3}
                                 : std::array<std::size_t, 5>{pb.j, pb.c1, pb.k, pb.c2, pb.c3};
            return ka < kb;
        });
        std::vector<std::size_t> pos(d);
        for (std::size_t p = 0; p < d; ++p) pos[order[p]] = p;
        return pos;
    };
    const auto left_pos = positions(true);
    const auto right_pos = positions(false);
    ComplexMatrix perm(d, d);
    for (std::size_t p = 0; p < d; ++p) perm(left_pos[p], right_pos[p]) = 1.0;
    return perm;
}

} // namespace ncg
