#include <doctest.h>

#include "cgplus/hwv_lab.hpp"
#include "support.hpp"

using namespace cgplus;

namespace {

SymElement P(const char* s) { return SymElement(Monomial::parse(s)); }

TensorElement plain(std::initializer_list<int> slots)
{
    TensorElement t(TensorShape(slots.size(), Factor::plain()));
    TensorKey k;
    for (int s : slots)
        k.push_back(static_cast<std::uint8_t>(s));
    t.add(k, 1);
    return t;
}

TensorElement without(const Monomial& m, int slot)
{
    return iota(SymElement(m.without_var(slot)));
}

}  // namespace

TEST_CASE("contraction examples")
{
    CHECK(contract(plain({slot_a(1), slot_b(1)}), 1, 2) == TensorElement::scalar(1));
    CHECK(contract(plain({slot_b(1), slot_a(1)}), 1, 2) == TensorElement::scalar(-1));
    CHECK(contract(plain({slot_a(1), slot_a(2), slot_b(3)}), 1, 2).is_zero());
    CHECK(contract(plain({slot_a(2), slot_a(1), slot_b(2)}), 1, -1) == plain({slot_a(1)}));
    CHECK_THROWS_AS(contract(plain({slot_a(1), slot_b(1)}), 1, 1), InvalidArgument);
    CHECK_THROWS_AS(contract(plain({slot_a(1), slot_b(1)}), 1, 3), InvalidArgument);
}

TEST_CASE("alternation examples")
{
    TensorElement w({Factor::wedge(2)});
    w.add({static_cast<std::uint8_t>(slot_a(1)), static_cast<std::uint8_t>(slot_a(2))}, 1);
    CHECK(alternate(plain({slot_a(1), slot_a(2)}), {1, 2}) == w);
    CHECK(alternate(plain({slot_a(1), slot_a(1)}), {1, 2}).is_zero());
    const TensorElement t = alternate(plain({slot_a(1), slot_b(2), slot_a(3)}), {1, -1});
    CHECK(t.shape() == TensorShape{Factor::wedge(2), Factor::plain()});
    CHECK_THROWS_AS(alternate(plain({slot_a(1), slot_a(2)}), {1, 1}), InvalidArgument);
    CHECK_THROWS_AS(alternate(plain({slot_a(1)}), {1}), InvalidArgument);
}

TEST_CASE("contraction formula for iota(f) (x) iota(h)")
{
    const SymplecticContext ctx(4);
    auto check_pair = [&](const Monomial& f, const Monomial& h) {
        const TensorElement t = tensor_product(iota(SymElement(f)), iota(SymElement(h)));
        const int nf = f.degree(), nh = h.degree();
        // oracle: sum over variables x_i of f and y_j of h
        TensorElement expect(TensorShape(static_cast<std::size_t>(nf + nh - 2), Factor::plain()));
        for (auto x : f.variable_sequence())
            for (auto y : h.variable_sequence()) {
                const int mu = ctx.pairing(x, y);
                if (mu == 0)
                    continue;
                TensorElement term = tensor_product(without(f, x), without(h, y));
                term *= Rational(mu);
                expect += term;
            }
        CHECK(contract(t, 1, nf + nh) == expect);
        // independent of the chosen pair of slots
        for (int i = 1; i <= nf; ++i)
            for (int j = nf + 1; j <= nf + nh; ++j)
                CHECK(contract(t, i, j) == expect);
    };
    check_pair(Monomial::parse("a1 a3"), Monomial::parse("b3^2"));
    for (int trial = 0; trial < 25; ++trial)
        check_pair(cgtest::random_monomial(4, cgtest::uniform(3, 5)), cgtest::random_monomial(4, cgtest::uniform(3, 5)));
}

TEST_CASE("highest weight vectors")
{
    const TensorElement a = highest_weight_vector(Partition::parse("[31]"));
    CHECK(a.shape() == TensorShape{Factor::wedge(2), Factor::plain(), Factor::plain()});
    CHECK(a.size() == 1);
    CHECK(highest_weight_vector(Partition::parse("[2]")) == plain({slot_a(1), slot_a(1)}));
}

TEST_CASE("detection coefficients")
{
    for (const auto& [k, l, lam] : std::vector<std::tuple<int, int, const char*>>{{3, 1, "[42]"}, {2, 2, "[31]"}, {4, 2, "[62]"}}) {
        const Partition lambda = Partition::parse(lam);
        const RhoData r(k, l, lambda);
        const Rational c = detect_highest_weight(detection_test_element(k, l, lambda), lambda,
                                                 OperatorPipeline::detection(r.rho(), lambda[1]));
        CHECK(c == Rational(detection_coefficient_closed_form(k, l, lambda)));
        CHECK(c != 0);
    }
    // k = l doubles: 2 (rho!)^2 (k+2-rho)! (l+2-l2-rho)! l2! with rho = 2
    CHECK(detection_coefficient_closed_form(2, 2, Partition::parse("[31]")) == 16);
    CHECK(detection_coefficient_closed_form(3, 1, Partition::parse("[42]")) == 48);
    const Partition lambda = Partition::parse("[42]");
    CHECK_THROWS_AS(detect_highest_weight(detection_test_element(3, 1, lambda), lambda, OperatorPipeline::detection(0, 0)),
                    InvalidArgument);
}

TEST_CASE("pipeline composition")
{
    const OperatorPipeline p = OperatorPipeline::detection(2, 1);
    CHECK(p.steps().size() == 3);
    CHECK(p.then(OperatorPipeline::detection(0, 1)).steps().size() == 4);
    CHECK(!p.str().empty());
}

TEST_CASE("raising kernel examples")
{
    for (int w = 1; w <= 3; ++w) {
        const auto ker = raising_kernel(4, 1, w, {w + 2, 0, 0, 0});
        REQUIRE(ker.size() == 1);
        const std::string top = "a1^" + std::to_string(w + 2);
        const ChainElement expect = wedge_of({P(top.c_str())}, 4);
        CHECK(ker[0].terms().size() == 1);
        CHECK(ker[0].terms().begin()->first == expect.terms().begin()->first);
    }
    CHECK(raising_kernel(4, 2, 2, {5, 1, 0, 0}).size() == 1);
    CHECK(raising_multiplicity(4, 2, 2, {5, 1, 0, 0}) == 1);
    CHECK_THROWS_AS(raising_kernel(4, 2, 2, {1, 5, 0, 0}), InvalidArgument);
    for (const auto& v : raising_kernel(4, 2, 2, {3, 3, 0, 0}))
        for (const auto& q : positive_root_vectors(4))
            CHECK(sp_act(q, v).is_zero());
}

TEST_CASE("Casimir")
{
    const Casimir c(4);
    CHECK(c.eigenvalue(Partition::parse("[0]")) == 0);
    const ChainElement x = wedge_of({P("a1^3")}, 4);
    CHECK(c.apply(x) == [&] {
        ChainElement y = x;
        y *= c.eigenvalue(Partition::parse("[3]"));
        return y;
    }());
    // on Lambda^2 c(1) the projections onto the components add up to the identity
    const ChainElement z = wedge_of({P("a1^2 a2"), P("a1 b2^2")}, 4);
    const Decomposition ambient = decompose_wedge_cg(1, 4);
    ChainElement sum(4, 2);
    for (const auto& [lambda, m] : ambient.terms()) {
        const ChainElement p = c.project(z, lambda, ambient);
        CHECK(c.project(p, lambda, ambient) == p);
        sum += p;
    }
    CHECK(sum == z);
    CHECK_THROWS_AS(c.project(z, Partition::parse("[6]"), ambient), InvalidArgument);
}
