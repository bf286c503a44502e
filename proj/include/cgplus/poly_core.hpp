#pragma once

// Polynomial layer: the symplectic vector space H = Q^{2g}, monomials in
// a_1..a_g, b_1..b_g, homogeneous elements of S^n H, the Poisson bracket,
// and the symmetrizing embedding S^n H -> H^{(x)n}.

#include "cgplus/errors.hpp"
#include "cgplus/rational.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cgplus {

inline constexpr int kMaxGenus = 8;
inline constexpr int kVarSlots = 2 * kMaxGenus;

/// Storage slot of a_i (1-based i).
constexpr int slot_a(int i) { return i - 1; }
/// Storage slot of b_i (1-based i).
constexpr int slot_b(int i) { return kMaxGenus + i - 1; }
constexpr bool slot_is_a(int s) { return s < kMaxGenus; }
/// 1-based index i of the a_i or b_i stored in slot s.
constexpr int slot_index(int s) { return (s % kMaxGenus) + 1; }

using TorusWeight = std::vector<int>;

class Monomial;

/// Genus together with the fixed symplectic basis a_1..a_g, b_1..b_g.
class SymplecticContext {
public:
    explicit SymplecticContext(int genus);

    int genus() const { return g_; }
    int dim() const { return 2 * g_; }

    /// Slot of the p-th basis vector in the order a_1..a_g, b_1..b_g.
    int basis_slot(int p) const { return p < g_ ? slot_a(p + 1) : slot_b(p - g_ + 1); }
    int basis_position(int slot) const;
    bool valid_slot(int slot) const;

    /// mu(x, y) for basis vectors in the given slots.
    int pairing(int slot_x, int slot_y) const;

    bool contains(const Monomial& m) const;

    bool operator==(const SymplecticContext&) const = default;

private:
    int g_;
};

/// Exponent vector over the 2*kMaxGenus variable slots. Independent of g:
/// a context decides which slots are live.
class Monomial {
public:
    Monomial() = default;

    static Monomial variable(int slot);
    static Monomial from_exponents(std::span<const int> a_exps, std::span<const int> b_exps);
    /// Parses "a1^2*a3*b4", "a1^2 a3 b4" or "1".
    static Monomial parse(std::string_view text);

    int exponent(int slot) const { return e_[slot]; }
    int degree() const;
    TorusWeight torus_weight(int genus) const;

    Monomial operator*(const Monomial& other) const;
    bool divisible_by_var(int slot) const { return e_[slot] > 0; }
    Monomial without_var(int slot) const;

    /// Variable slots with multiplicity, ascending.
    std::vector<std::uint8_t> variable_sequence() const;

    std::string str() const;

    std::strong_ordering operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;

    std::size_t hash() const;

private:
    std::array<std::uint8_t, kVarSlots> e_{};
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

TorusWeight torus_weight(const Monomial& m, const SymplecticContext& ctx);

/// Ordered basis of S^d H for a fixed genus: all monomials of degree d in
/// a_1..a_g, b_1..b_g, ordered lexicographically by their ascending
/// variable sequence (a_1 < ... < a_g < b_1 < ... < b_g), so a_1^d is first.
class MonomialBasis {
public:
    MonomialBasis(int genus, int degree);

    /// Shared cached instance.
    static const MonomialBasis& get(int genus, int degree);

    int genus() const { return g_; }
    int degree() const { return d_; }
    std::size_t size() const { return monos_.size(); }
    const Monomial& operator[](std::size_t i) const { return monos_[i]; }
    const std::vector<Monomial>& monomials() const { return monos_; }

    /// Index of m, or -1 when m is not in this basis.
    std::int64_t index_of(const Monomial& m) const;

private:
    int g_;
    int d_;
    std::vector<Monomial> monos_;
    std::unordered_map<Monomial, std::uint32_t, MonomialHash> index_;
};

/// Homogeneous element of S^d H with exact rational coefficients.
class SymElement {
public:
    explicit SymElement(int degree) : degree_(degree) {}
    SymElement(const Monomial& m, Rational coeff = 1);
    /// Throws InvalidArgument on mixed degrees.
    static SymElement from_terms(const std::vector<std::pair<Monomial, Rational>>& terms);

    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    Rational coefficient(const Monomial& m) const;

    void add_term(const Monomial& m, const Rational& c);

    SymElement& operator+=(const SymElement& o);
    SymElement& operator-=(const SymElement& o);
    SymElement& operator*=(const Rational& c);
    friend SymElement operator+(SymElement a, const SymElement& b) { return a += b; }
    friend SymElement operator-(SymElement a, const SymElement& b) { return a -= b; }
    friend SymElement operator*(const Rational& c, SymElement a) { return a *= c; }
    SymElement operator-() const;

    bool operator==(const SymElement& o) const { return degree_ == o.degree_ && terms_ == o.terms_; }

    std::string str() const;

private:
    int degree_;
    std::map<Monomial, Rational> terms_;
};

/// Bracket of two monomials: sum over i of
/// (d/da_i f)(d/db_i h) - (d/db_i f)(d/da_i h). Every summand is the same
/// monomial f*h/(a_i b_i) so the result is a list of (monomial, integer).
void bracket_monomials(const Monomial& f, const Monomial& h, int genus,
                       std::vector<std::pair<Monomial, std::int64_t>>& out);

SymElement poisson_bracket(const SymElement& f, const SymElement& h, const SymplecticContext& ctx);

// ---------------------------------------------------------------------------
// Tensors (Lambda^{k_1} H) (x) ... (x) (Lambda^{k_p} H) (x) H^{(x)n}

struct Factor {
    enum class Kind : std::uint8_t { Plain, Wedge };
    Kind kind = Kind::Plain;
    int arity = 1;

    static Factor plain() { return {Kind::Plain, 1}; }
    static Factor wedge(int k) { return {Kind::Wedge, k}; }
    bool operator==(const Factor&) const = default;
};

using TensorShape = std::vector<Factor>;
using TensorKey = std::vector<std::uint8_t>;

std::string shape_str(const TensorShape& shape);

/// Sparse element of a tensor product of exterior powers and copies of H.
/// Keys concatenate per-factor variable slots; wedge factors are stored as
/// strictly increasing slot tuples.
class TensorElement {
public:
    explicit TensorElement(TensorShape shape);
    static TensorElement scalar(const Rational& c);

    const TensorShape& shape() const { return shape_; }
    std::size_t key_length() const { return key_len_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<TensorKey, Rational>& terms() const { return terms_; }

    /// Adds c * (factor entries given by key); wedge blocks are sorted with
    /// sign, repeated slots inside a wedge give zero.
    void add(TensorKey key, const Rational& c);
    Rational coefficient(TensorKey key) const;

    TensorElement& operator+=(const TensorElement& o);
    TensorElement& operator-=(const TensorElement& o);
    TensorElement& operator*=(const Rational& c);
    friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }

    bool operator==(const TensorElement& o) const { return shape_ == o.shape_ && terms_ == o.terms_; }

    /// Index of the first Plain factor; Wedge factors all precede it.
    std::size_t plain_offset() const;
    std::size_t plain_count() const { return shape_.size() - plain_offset(); }

    std::string str() const;

private:
    TensorShape shape_;
    std::size_t key_len_ = 0;
    std::map<TensorKey, Rational> terms_;
};

/// Outer product a (x) b (shapes concatenated). Both operands must have
/// only Plain factors after their Wedge factors, and b must not have Wedge
/// factors unless a has no Plain ones.
TensorElement tensor_product(const TensorElement& a, const TensorElement& b);

/// Unnormalized symmetrization: a monomial x_1...x_n maps to the sum over
/// all n! orderings, so x^m -> m! x^{(x)m}.
TensorElement iota(const SymElement& f);

}  // namespace cgplus
