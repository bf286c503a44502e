#include <doctest.h>

#include "support.hpp"

#include <set>

using namespace cgplus;

namespace {

SymElement P(const char* s) { return SymElement(Monomial::parse(s)); }

TensorKey key(std::initializer_list<int> slots)
{
    TensorKey k;
    for (int s : slots)
        k.push_back(static_cast<std::uint8_t>(s));
    return k;
}

}  // namespace

TEST_CASE("symplectic form on basis pairs")
{
    for (int g = 1; g <= 4; ++g) {
        const SymplecticContext ctx(g);
        for (int p = 0; p < ctx.dim(); ++p)
            for (int q = 0; q < ctx.dim(); ++q) {
                const int x = ctx.basis_slot(p), y = ctx.basis_slot(q);
                CHECK(ctx.pairing(x, y) == -ctx.pairing(y, x));
                int expect = 0;
                if (slot_is_a(x) && !slot_is_a(y) && slot_index(x) == slot_index(y))
                    expect = 1;
                if (!slot_is_a(x) && slot_is_a(y) && slot_index(x) == slot_index(y))
                    expect = -1;
                CHECK(ctx.pairing(x, y) == expect);
            }
    }
}

TEST_CASE("monomial parsing and printing")
{
    const Monomial m = Monomial::parse("a1^2 a3 b4^3");
    CHECK(m.degree() == 6);
    CHECK(m.exponent(slot_a(1)) == 2);
    CHECK(m.exponent(slot_b(4)) == 3);
    CHECK(Monomial::parse(m.str()) == m);
    CHECK_THROWS_AS(Monomial::parse("c1"), InvalidArgument);
    CHECK_THROWS_AS(Monomial::parse("a0"), InvalidArgument);
}

TEST_CASE("torus weight")
{
    const SymplecticContext ctx(4);
    CHECK(torus_weight(Monomial::parse("a1^3"), ctx) == TorusWeight{3, 0, 0, 0});
    CHECK(torus_weight(Monomial::parse("a1 a2 b2"), ctx) == TorusWeight{1, 0, 0, 0});
    const Monomial x = Monomial::parse("a1 a4 b3"), y = Monomial::parse("a2^2 b4");
    TorusWeight sum = torus_weight(x, ctx);
    const TorusWeight wy = torus_weight(y, ctx);
    for (std::size_t i = 0; i < sum.size(); ++i)
        sum[i] += wy[i];
    CHECK(torus_weight(x * y, ctx) == sum);
}

TEST_CASE("monomial basis sizes")
{
    for (int g = 1; g <= 4; ++g)
        for (int d = 0; d <= 5; ++d)
            CHECK(MonomialBasis::get(g, d).size() == binomial(2 * g + d - 1, d).get_ui());
    const auto& b = MonomialBasis::get(3, 4);
    for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(b.index_of(b[i]) == static_cast<std::int64_t>(i));
}

TEST_CASE("poisson bracket examples")
{
    const SymplecticContext ctx(4);
    CHECK(poisson_bracket(P("a1"), P("b1"), ctx) == SymElement(Monomial(), 1));
    CHECK(poisson_bracket(P("b1"), P("a1"), ctx) == SymElement(Monomial(), -1));
    for (int w = 1; w <= 5; ++w) {
        const std::string f = "a1^" + std::to_string(w) + " a4";
        CHECK(poisson_bracket(P(f.c_str()), P("a1^2 b4"), ctx) ==
              P(("a1^" + std::to_string(w + 2)).c_str()));
    }
    // d/da3 (a1 a3^3) * d/db3 (a1 a4 b3) = 3 a1 a3^2 * a1 a4
    CHECK(poisson_bracket(P("a1 a3^3"), P("a1 a4 b3"), ctx) == SymElement(Monomial::parse("a1^2 a3^2 a4"), 3));
    const SymElement f = P("a1^2 b2") + SymElement(Monomial::parse("a3 b1 b3"), -2);
    CHECK(poisson_bracket(f, f, ctx).is_zero());
    const SymElement top = poisson_bracket(P("a1^2 a4"), P("a1^2 b4"), ctx);
    for (const auto& [m, c] : top.terms())
        CHECK(torus_weight(m, ctx) == TorusWeight{4, 0, 0, 0});
    CHECK_THROWS_AS(poisson_bracket(P("a4 b1"), P("a1"), SymplecticContext(2)), InvalidArgument);
}

TEST_CASE("bracket preserves torus weight summand-wise")
{
    const SymplecticContext ctx(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Monomial x = cgtest::random_monomial(3, cgtest::uniform(2, 4));
        const Monomial y = cgtest::random_monomial(3, cgtest::uniform(2, 4));
        TorusWeight s = torus_weight(x, ctx);
        const TorusWeight t = torus_weight(y, ctx);
        for (std::size_t i = 0; i < s.size(); ++i)
            s[i] += t[i];
        const SymElement b = poisson_bracket(SymElement(x), SymElement(y), ctx);
        for (const auto& [m, c] : b.terms())
            CHECK(torus_weight(m, ctx) == s);
    }
}

TEST_CASE("iota is the unnormalized symmetrization")
{
    const TensorElement sq = iota(P("a1^2"));
    CHECK(sq.size() == 1);
    CHECK(sq.coefficient(key({slot_a(1), slot_a(1)})) == 2);

    const TensorElement ab = iota(P("a1 a2"));
    CHECK(ab.size() == 2);
    CHECK(ab.coefficient(key({slot_a(1), slot_a(2)})) == 1);
    CHECK(ab.coefficient(key({slot_a(2), slot_a(1)})) == 1);

    // three distinct orderings, each reached by 2! permutations of the a1's
    const TensorElement t = iota(P("a1^2 b1"));
    CHECK(t.size() == 3);
    for (const auto& [k, c] : t.terms())
        CHECK(c == 2);
    CHECK(iota(P("a2^3 b1")).coefficient(key({slot_a(2), slot_b(1), slot_a(2), slot_a(2)})) == 6);
}

TEST_CASE("iota is injective on basis monomials")
{
    for (int d = 1; d <= 5; ++d) {
        const auto& basis = MonomialBasis::get(2, d);
        std::set<TensorKey> seen;
        for (const auto& m : basis.monomials()) {
            const TensorElement t = iota(SymElement(m));
            CHECK(!t.is_zero());
            for (const auto& [k, c] : t.terms())
                CHECK(seen.insert(k).second);
        }
    }
}

TEST_CASE("tensor element arithmetic and wedge signs")
{
    TensorElement t({Factor::wedge(2), Factor::plain()});
    t.add(key({slot_a(2), slot_a(1), slot_b(1)}), 1);
    CHECK(t.coefficient(key({slot_a(1), slot_a(2), slot_b(1)})) == -1);
    t.add(key({slot_a(1), slot_a(1), slot_b(1)}), 5);
    CHECK(t.size() == 1);
    TensorElement u = t;
    u *= Rational(-1);
    CHECK((t + u).is_zero());
    CHECK(shape_str(t.shape()) == "L2H (x) H");
}
