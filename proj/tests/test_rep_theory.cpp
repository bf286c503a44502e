#include <doctest.h>

#include "cgplus/rep_theory.hpp"
#include "support.hpp"

using namespace cgplus;

namespace {

Partition L(const char* s) { return Partition::parse(s); }
Decomposition D(const char* s) { return Decomposition::parse(s); }

Integer total(const WeightDiagram& d)
{
    Integer t = 0;
    for (const auto& [mu, m] : d)
        t += m;
    return t;
}

WeightDiagram diagram_of(const Decomposition& d, int g)
{
    WeightDiagram out;
    for (const auto& [lambda, mult] : d.terms())
        for (const auto& [mu, m] : sp_weight_multiplicities(lambda, g))
            out[mu] += m * mult;
    return out;
}

}  // namespace

TEST_CASE("partitions")
{
    CHECK(L("[431]").transpose() == L("[3221]"));
    CHECK(L("[4,3,1]") == L("[431]"));
    CHECK(L("[0]").length() == 0);
    CHECK(L("[52]").str() == "[52]");
    CHECK(L("[10,2]").str() == "[10,2]");
    CHECK(partitions_of(5).size() == 7);
    CHECK(partitions_of(6, 2).size() == 4);
    CHECK_THROWS_AS(L("[13]"), InvalidArgument);
}

TEST_CASE("Weyl dimension")
{
    CHECK(sp_dim(L("[0]"), 3) == 1);
    CHECK(sp_dim(L("[1]"), 4) == 8);
    CHECK(sp_dim(L("[11]"), 2) == 5);
    CHECK(sp_dim(L("[2]"), 2) == 10);
    // S^n H is irreducible, so [n] has the dimension of the monomial count
    for (int g = 1; g <= 4; ++g)
        for (int n = 1; n <= 6; ++n)
            CHECK(sp_dim(Partition({n}), g) == binomial(static_cast<unsigned>(2 * g + n - 1), static_cast<unsigned>(n)));
    CHECK(sp_dim(L("[3]"), 2) == 20);
}

TEST_CASE("weight multiplicities")
{
    const auto one = sp_weight_multiplicities(L("[1]"), 2);
    CHECK(one.size() == 4);
    for (const auto& mu : {TorusWeight{1, 0}, TorusWeight{-1, 0}, TorusWeight{0, 1}, TorusWeight{0, -1}})
        CHECK(one.at(mu) == 1);
    const auto two = sp_weight_multiplicities(L("[2]"), 2);
    CHECK(total(two) == 10);
    CHECK(two.at({0, 0}) == 2);
    CHECK(total(sp_weight_multiplicities(L("[11]"), 2)) == 5);
}

TEST_CASE("Freudenthal agrees with tableaux and with Weyl")
{
    for (int g = 1; g <= 3; ++g)
        for (int n = 0; n <= 5; ++n)
            for (const auto& lambda : partitions_of(n, g)) {
                const auto f = sp_weight_multiplicities(lambda, g);
                CHECK(f == sp_weight_multiplicities_tableaux(lambda, g));
                CHECK(total(f) == sp_dim(lambda, g));
            }
}

TEST_CASE("peeling")
{
    CHECK(decompose_from_weight_dims(sp_weight_multiplicities(L("[1]"), 3), 3) == D("[1]"));
    CHECK(decompose_from_weight_dims(sym_power_diagram(3, 2), 2) == D("[3]"));
    // round trip on random small decompositions
    for (int trial = 0; trial < 20; ++trial) {
        const int g = cgtest::uniform(2, 3);
        Decomposition d;
        for (int i = 0; i < 4; ++i) {
            const auto parts = partitions_of(cgtest::uniform(0, 4), g);
            d.add(parts[static_cast<std::size_t>(cgtest::uniform(0, static_cast<int>(parts.size()) - 1))],
                  cgtest::uniform(1, 3));
        }
        CHECK(decompose_from_weight_dims(diagram_of(d, g), g) == d);
    }
    WeightDiagram bad = sp_weight_multiplicities(L("[2]"), 2);
    bad[{1, 1}] += 1;
    CHECK_THROWS(decompose_from_weight_dims(bad, 2));
}

TEST_CASE("Littlewood-Richardson")
{
    CHECK(lr_coefficient(L("[21]"), L("[1]"), L("[11]")) == 1);
    CHECK(lr_coefficient(L("[321]"), L("[21]"), L("[21]")) == 2);
    const auto p = lr_product(L("[1]"), L("[1]"));
    CHECK(p.size() == 2);
    CHECK(p.at(L("[2]")) == 1);
    CHECK(p.at(L("[11]")) == 1);
    CHECK(branch_gl_to_sp(L("[11]"), 2) == D("[11] + [0]"));
    CHECK(branch_gl_to_sp(L("[2]"), 2) == D("[2]"));
}

TEST_CASE("plethysm e2 o h_n")
{
    CHECK(plethysm_e2_h(3) == std::map<Partition, Integer>{{L("[51]"), 1}, {L("[33]"), 1}});
    for (int n = 1; n <= 7; ++n)
        CHECK(plethysm_e2_h(n) == plethysm_e2_h_formula(n));
}

TEST_CASE("c(k) (x) c(l)")
{
    const Decomposition d = decompose_tensor_cg(2, 1, 4);
    CHECK(d == D("[7]+[61]+[52]+[43]+[5]+[41]+[32]+[3]+[21]+[1]"));
    CHECK(d.count() == 10);
    const Decomposition d31 = decompose_tensor_cg(3, 1, 4);
    CHECK(d31.multiplicity(L("[4]")) == 1);
    CHECK(RhoData(3, 1, L("[4]")).rho() == 2);
    for (const auto& [lambda, m] : d31.terms())
        CHECK(lambda[1] <= 3);
    for (int k = 1; k <= 4; ++k)
        for (int l = 1; l < k; ++l) {
            CHECK(decompose_tensor_cg_lr(k, l, 4) == decompose_tensor_cg(k, l, 4));
            CHECK(decompose_tensor_cg(k, l, 4).total_dim(4) == sp_dim(Partition({k + 2}), 4) * sp_dim(Partition({l + 2}), 4));
        }
}

TEST_CASE("Lambda^2 c(k)")
{
    CHECK(decompose_wedge_cg(1, 4) == D("[51]+[33]+[4]+[22]+[11]+[0]"));
    CHECK(decompose_wedge_cg(2, 4).total_dim(4) == 54285);
    for (int k = 1; k <= 5; ++k)
        CHECK(decompose_wedge_cg_plethysm(k, 4) == decompose_wedge_cg(k, 4));
    CHECK(decompose_from_weight_dims(exterior_power_diagram(sym_power_diagram(3, 4), 2), 4) == decompose_wedge_cg(1, 4));
}

TEST_CASE("Lambda^3 c(1)")
{
    const Decomposition d = decompose_lambda3_c1(4);
    CHECK(d.multiplicity(L("[52]")) == 2);
    CHECK(d.multiplicity(L("[3]")) == 3);
    CHECK(d.total_dim(4) == 280840);
    CHECK(d.count() == 20);
    CHECK(d.distinct() == 15);
    CHECK(decompose_from_weight_dims(exterior_power_diagram(sym_power_diagram(3, 4), 3), 4) == d);
}

TEST_CASE("rho data")
{
    const RhoData r(2, 2, L("[31]"));
    CHECK(r.rho_valid());
    CHECK(r.rho() == 2);
    CHECK_FALSE(RhoData(2, 1, L("[6]")).rho_valid());
}
