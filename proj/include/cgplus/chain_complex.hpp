#pragma once

// Weight-graded Chevalley-Eilenberg complex of c_g^+ = sum_{w>=1} S^{w+2}H:
// bases of (Lambda^n c^+)_w, the differential as sparse matrices, and the
// splitting into torus-weight blocks.

#include "cgplus/exact_linalg.hpp"
#include "cgplus/poly_core.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cgplus {

/// One factor of a basis wedge: the monomial with the given index in the
/// basis of c(weight) = S^{weight+2}H.
struct WedgeFactor {
    std::uint16_t weight = 0;
    std::uint32_t index = 0;
    bool operator==(const WedgeFactor&) const = default;
};

/// Canonical factor order: weight descending, then index ascending.
inline bool canonical_before(const WedgeFactor& x, const WedgeFactor& y)
{
    return x.weight != y.weight ? x.weight > y.weight : x.index < y.index;
}

using Wedge = std::vector<WedgeFactor>;

struct WedgeLess {
    bool operator()(const Wedge& x, const Wedge& y) const;
};

/// Sorts into canonical order. Returns the sign of the sorting permutation,
/// or 0 when a factor repeats.
int canonicalize(Wedge& w);

std::string wedge_str(const Wedge& w, int genus);

/// dim c_g(w) = C(2g+w+1, w+2).
std::size_t sym_dim(int genus, int w);

/// Ordered basis of (Lambda^n c^+)_w, optionally restricted to one torus
/// weight. Order: weight partitions (k_1 >= ... >= k_n) lexicographically
/// descending, then monomial indices lexicographically.
class ChainBasis {
public:
    static ChainBasis build(int genus, int n, int w, std::optional<TorusWeight> block = std::nullopt);

    int genus() const { return g_; }
    int degree() const { return n_; }
    int weight() const { return w_; }
    const std::optional<TorusWeight>& block() const { return block_; }

    std::size_t size() const { return n_ == 0 ? 0 : flat_.size() / static_cast<std::size_t>(n_); }
    std::span<const WedgeFactor> entry(std::size_t i) const
    {
        return {flat_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    /// Position of a canonical wedge, or -1.
    std::int64_t index_of(std::span<const WedgeFactor> w) const;
    TorusWeight torus_weight_of(std::size_t i) const;

private:
    int g_ = 0, n_ = 0, w_ = 0;
    std::optional<TorusWeight> block_;
    std::vector<WedgeFactor> flat_;
    std::unordered_map<std::u32string, std::uint32_t> lookup_;
};

/// Finite linear combination of canonical wedges f_1 ^ ... ^ f_n with
/// f_i monomials of weight >= 1.
class ChainElement {
public:
    ChainElement(int genus, int n) : g_(genus), n_(n) {}

    int genus() const { return g_; }
    int degree() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Wedge, Rational, WedgeLess>& terms() const { return terms_; }

    /// Adds c * (w_1 ^ ... ^ w_n); the wedge need not be canonical.
    void add(Wedge w, const Rational& c);
    Rational coefficient(Wedge w) const;

    ChainElement& operator+=(const ChainElement& o);
    ChainElement& operator-=(const ChainElement& o);
    ChainElement& operator*=(const Rational& c);
    friend ChainElement operator+(ChainElement a, const ChainElement& b) { return a += b; }
    friend ChainElement operator-(ChainElement a, const ChainElement& b) { return a -= b; }
    bool operator==(const ChainElement& o) const;

    /// Terms grouped by their weight partition (k_1 >= ... >= k_n).
    std::map<std::vector<int>, ChainElement, std::greater<>> by_component() const;

    std::string str() const;

private:
    int g_, n_;
    std::map<Wedge, Rational, WedgeLess> terms_;
};

/// f_1 ^ ... ^ f_n expanded multilinearly. Each f_i must have degree >= 3.
ChainElement wedge_of(const std::vector<SymElement>& factors, int genus);

/// Converts a factor back to a homogeneous polynomial.
SymElement factor_poly(const WedgeFactor& f, int genus);

/// The CE boundary applied directly to an element.
ChainElement boundary(const ChainElement& x);

/// Coordinates in the given basis; throws InvalidArgument if a term lies
/// outside it.
SparseVector coordinates(const ChainElement& x, const ChainBasis& basis);
ChainElement from_coordinates(const ChainBasis& basis, const SparseVector& v);

/// Matrix of d_n : source -> target (columns = source). The target must be
/// the (n-1, w) basis for the same block (or both unrestricted). A nonzero
/// entry landing outside the target is a hard failure.
SparseMatrix ce_differential(const ChainBasis& source, const ChainBasis& target, unsigned jobs = 1);
SparseMatrix ce_differential(int genus, int n, int w, unsigned jobs = 1);

struct BlockIndex {
    std::map<TorusWeight, std::vector<std::uint32_t>> blocks;
};
BlockIndex block_decompose(const ChainBasis& basis);

// ---------------------------------------------------------------------------
// Dimension counting and Weyl symmetry

/// dim (Lambda^n c^+)_w for every torus weight, by generating functions.
std::map<TorusWeight, Integer> chain_block_dims(int genus, int n, int w);
Integer chain_dim(int genus, int n, int w);

bool is_dominant(const TorusWeight& mu);
/// Dominant representative: absolute values sorted descending.
TorusWeight dominant_of(const TorusWeight& mu);
/// Size of the orbit under signed permutations.
std::size_t weyl_orbit_size(const TorusWeight& mu);
std::vector<TorusWeight> weyl_orbit(const TorusWeight& mu);

std::string weight_str(const TorusWeight& mu);
TorusWeight parse_weight(const std::string& s);

}  // namespace cgplus
