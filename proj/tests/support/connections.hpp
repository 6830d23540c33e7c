#pragma once

// Random valid Morita connections: the canonical flat connection plus a
// right-module-map part built from one-form pairs.

#include <random>

#include "ncg/morphisms.hpp"

namespace ncg::testing {

inline MoritaConnection random_connection(std::mt19937_64& rng, const SpectralTriple& src,
                                          const SpectralTriple& tgt,
                                          const HilbertBimodule& x) {
    std::normal_distribution<double> g(0.0, 1.0);
    auto conn = MoritaConnection::flat(src, tgt, x);
    std::vector<std::size_t> right_index;
    for (const auto& comp : x.components())
        for (std::size_t c = 0; c < comp.dim(); ++c) right_index.push_back(comp.j);
    auto values = conn.values();
    const auto& alg = tgt.algebra();
    const std::size_t total = x.total_dim();
    for (std::size_t r = 0; r < total; ++r) {
        for (std::size_t s = 0; s < total; ++s) {
            if (rng() % 2 == 0) continue;
            // pi(e_{j_s} a)[D, pi(b)] pi(e_{j_r}) spelled through the
            // Leibniz identity keeps the summand a right-module map
            std::vector<Complex> ca(alg.dim()), cb(alg.dim());
            for (auto& z : ca) z = Complex(g(rng), g(rng));
            for (auto& z : cb) z = Complex(g(rng), g(rng));
            const auto a = alg.from_coords(ca);
            const auto b = alg.from_coords(cb);
            const auto es = alg.block_idempotent(right_index[s]);
            const auto er = alg.block_idempotent(right_index[r]);
            OneForm extra(tgt, {{es * a, b * er, Complex(0.5, 0.0)},
                                {es * a * b, er, Complex(-0.5, 0.0)}});
            values[r].push_back({s, std::move(extra)});
        }
    }
    return MoritaConnection(src, tgt, x, std::move(values));
}

} // namespace ncg::testing
