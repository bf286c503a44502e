// Randomized and cross-oracle properties. Seeds are fixed; every check is
// an exact equality.

#include <doctest.h>

#include "cgplus/hwv_lab.hpp"
#include "support.hpp"

using namespace cgplus;

TEST_CASE("bracket antisymmetry and Jacobi on 100 random triples")
{
    const SymplecticContext ctx(3);
    for (int trial = 0; trial < 100; ++trial) {
        const SymElement f = cgtest::random_sym(3, cgtest::uniform(2, 4), 3);
        const SymElement g = cgtest::random_sym(3, cgtest::uniform(2, 4), 3);
        const SymElement h = cgtest::random_sym(3, cgtest::uniform(2, 4), 3);
        CHECK(poisson_bracket(f, g, ctx) == -poisson_bracket(g, f, ctx));
        const SymElement jac = poisson_bracket(f, poisson_bracket(g, h, ctx), ctx) +
                               poisson_bracket(g, poisson_bracket(h, f, ctx), ctx) +
                               poisson_bracket(h, poisson_bracket(f, g, ctx), ctx);
        CHECK(jac.is_zero());
    }
}

TEST_CASE("contraction and alternation commute with the sp action on 100 random tensors")
{
    const SymplecticContext ctx(2);
    const TensorShape shape{Factor::wedge(2), Factor::plain(), Factor::plain(), Factor::plain(), Factor::plain()};
    const auto& quadratics = MonomialBasis::get(2, 2).monomials();
    for (int trial = 0; trial < 100; ++trial) {
        const TensorElement t = cgtest::random_tensor(shape, ctx, 4);
        for (const auto& m : quadratics) {
            const SymElement q(m);
            CHECK(contract(sp_act(q, t, ctx), 1, -1) == sp_act(q, contract(t, 1, -1), ctx));
            CHECK(contract(sp_act(q, t, ctx), 2, 3) == sp_act(q, contract(t, 2, 3), ctx));
            CHECK(alternate(sp_act(q, t, ctx), {1, -1}) == sp_act(q, alternate(t, {1, -1}), ctx));
            CHECK(alternate(sp_act(q, t, ctx), {1, 2, 4}) == sp_act(q, alternate(t, {1, 2, 4}), ctx));
        }
    }
}

TEST_CASE("the differential and iota are equivariant")
{
    const ChainBasis b = ChainBasis::build(4, 2, 3);
    const auto roots = positive_root_vectors(4);
    const SymplecticContext ctx(4);
    for (int trial = 0; trial < 10; ++trial) {
        const ChainElement x = cgtest::random_chain(b, 3);
        for (const auto& q : roots)
            CHECK(boundary(sp_act(q, x)) == sp_act(q, boundary(x)));
        const SymElement f = cgtest::random_sym(4, 3, 3);
        const SymElement q = cgtest::random_sym(4, 2, 2);
        CHECK(iota(poisson_bracket(q, f, ctx)) == sp_act(q, iota(f), ctx));
    }
}

TEST_CASE("Lemma 4.3 family for every admissible (k, l, lambda), k + l <= 7")
{
    int checked = 0;
    for (int w = 2; w <= 7; ++w)
        for (int l = 1; 2 * l <= w; ++l) {
            const int k = w - l;
            const Decomposition d = k > l ? decompose_tensor_cg(k, l, 4) : decompose_wedge_cg(k, 4);
            for (const auto& [lambda, m] : d.terms()) {
                if (lambda.length() > 2)
                    continue;
                const RhoData r(k, l, lambda);
                const Rational c = detect_highest_weight(detection_test_element(k, l, lambda), lambda,
                                                         OperatorPipeline::detection(r.rho(), lambda[1]));
                CHECK_MESSAGE(c == Rational(detection_coefficient_closed_form(k, l, lambda)),
                              "k=", k, " l=", l, " lambda=", lambda.str());
                ++checked;
            }
        }
    CHECK(checked == 140);
}

namespace {

// Both oracles on every dominant block: kernel of the raising operators
// against peeling of the block dimensions.
void dual_oracle(int n, int w, const Decomposition& expected)
{
    std::map<TorusWeight, Integer> dims;
    for (const auto& [mu, d] : chain_block_dims(4, n, w))
        dims[mu] = d;
    const Decomposition peeled = decompose_from_weight_dims(dims, 4);
    CHECK(peeled == expected);
    Decomposition raised;
    for (const auto& [mu, d] : dims) {
        if (!is_dominant(mu))
            continue;
        const std::size_t m = raising_multiplicity(4, n, w, mu);
        if (m)
            raised.add(Partition(std::vector<int>(mu.begin(), mu.end())), static_cast<long>(m));
    }
    CHECK(raised == peeled);
}

}  // namespace

TEST_CASE("dual oracle on Lambda^2 c(1)") { dual_oracle(2, 2, decompose_wedge_cg(1, 4)); }

TEST_CASE("dual oracle on c(2) (x) c(1)") { dual_oracle(2, 3, decompose_tensor_cg(2, 1, 4)); }

TEST_CASE("dual oracle on Lambda^3 c(1)")
{
    dual_oracle(3, 3, decompose_lambda3_c1(4));
    CHECK(raising_kernel(4, 3, 3, {5, 2, 0, 0}).size() == 2);
}
