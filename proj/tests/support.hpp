#pragma once

// Shared helpers for the test binaries: seeded generators and a small
// dense elimination used as an independent rank oracle.

#include "cgplus/chain_complex.hpp"
#include "cgplus/poly_core.hpp"
#include "cgplus/rep_theory.hpp"
#include "cgplus/sparse_matrix.hpp"

#include <ostream>
#include <random>
#include <vector>

// Printers so that failed checks show the values.
namespace cgplus {
inline std::ostream& operator<<(std::ostream& os, const Monomial& m) { return os << m.str(); }
inline std::ostream& operator<<(std::ostream& os, const SymElement& x) { return os << x.str(); }
inline std::ostream& operator<<(std::ostream& os, const TensorElement& x) { return os << x.str(); }
inline std::ostream& operator<<(std::ostream& os, const ChainElement& x) { return os << x.str(); }
inline std::ostream& operator<<(std::ostream& os, const Partition& p) { return os << p.str(); }
inline std::ostream& operator<<(std::ostream& os, const Decomposition& d) { return os << d.str(); }
}  // namespace cgplus

namespace cgtest {

using namespace cgplus;

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline Rational small_coeff()
{
    int c = 0;
    while (c == 0)
        c = uniform(-5, 5);
    return c;
}

inline const Monomial& random_monomial(int g, int degree)
{
    const auto& basis = MonomialBasis::get(g, degree);
    return basis[static_cast<std::size_t>(uniform(0, static_cast<int>(basis.size()) - 1))];
}

inline SymElement random_sym(int g, int degree, int terms)
{
    SymElement f(random_monomial(g, degree), small_coeff());
    for (int i = 1; i < terms; ++i)
        f += SymElement(random_monomial(g, degree), small_coeff());
    return f;
}

inline std::uint8_t random_slot(const SymplecticContext& ctx)
{
    return static_cast<std::uint8_t>(ctx.basis_slot(uniform(0, ctx.dim() - 1)));
}

inline TensorElement random_tensor(const TensorShape& shape, const SymplecticContext& ctx, int terms)
{
    std::size_t len = 0;
    for (const auto& f : shape)
        len += static_cast<std::size_t>(f.arity);
    TensorElement t(shape);
    for (int i = 0; i < terms; ++i) {
        TensorKey key(len);
        for (auto& s : key)
            s = random_slot(ctx);
        t.add(key, small_coeff());
    }
    return t;
}

/// Random element of (Lambda^n c^+)_w with the given number of wedges.
inline ChainElement random_chain(const ChainBasis& basis, int terms)
{
    ChainElement x(basis.genus(), basis.degree());
    for (int i = 0; i < terms; ++i) {
        const auto e = basis.entry(static_cast<std::size_t>(uniform(0, static_cast<int>(basis.size()) - 1)));
        x.add(Wedge(e.begin(), e.end()), small_coeff());
    }
    return x;
}

/// Rank over Q by dense Gauss-Jordan elimination on rationals.
inline std::size_t dense_rank(const SparseMatrix& m)
{
    std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols(), Rational(0)));
    for (const auto& t : m.triplets())
        a[t.row][t.col] = make_rational(t.num, t.den);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        std::size_t p = rank;
        while (p < m.rows() && a[p][c] == 0)
            ++p;
        if (p == m.rows())
            continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == rank || a[r][c] == 0)
                continue;
            const Rational f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < m.cols(); ++k)
                a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace cgtest
