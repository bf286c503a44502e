#include <doctest.h>

#include "cgplus/exact_linalg.hpp"
#include "cgplus/homology.hpp"
#include "support.hpp"

using namespace cgplus;

namespace {

SymElement P(const char* s) { return SymElement(Monomial::parse(s)); }

ChainElement W(std::initializer_list<const char*> factors, int g = 4)
{
    std::vector<SymElement> f;
    for (const char* s : factors)
        f.push_back(P(s));
    return wedge_of(f, g);
}

}  // namespace

TEST_CASE("chain basis dimensions")
{
    CHECK(ChainBasis::build(4, 1, 1).size() == 120);
    CHECK(chain_dim(4, 1, 1) == 120);
    CHECK(chain_dim(4, 2, 4) == 95040 + 54285);
    CHECK(ChainBasis::build(4, 2, 4).size() == 149325);
    CHECK(ChainBasis::build(2, 3, 2).size() == 0);
    CHECK(chain_dim(2, 3, 2) == 0);
    for (int g = 1; g <= 3; ++g)
        for (int w = 1; w <= 5; ++w)
            for (int n = 1; n <= w; ++n)
                CHECK(chain_dim(g, n, w) == ChainBasis::build(g, n, w).size());
}

TEST_CASE("wedges are canonical and antisymmetric")
{
    const ChainElement x = W({"a1^2 a2", "a1^3 b2"});
    const ChainElement y = W({"a1^3 b2", "a1^2 a2"});
    CHECK((x + y).is_zero());
    CHECK(W({"a1^3", "a1^3"}).is_zero());
    CHECK_THROWS_AS(W({"a1^2"}), InvalidArgument);
}

TEST_CASE("boundary examples")
{
    for (int w = 2; w <= 5; ++w) {
        const std::string f = "a1^" + std::to_string(w) + " a4";
        const std::string out = "a1^" + std::to_string(w + 2);
        CHECK(boundary(W({f.c_str(), "a1^2 b4"})) == W({out.c_str()}));
    }
    // omega = a1^k a4 ^ a1^2 b4 ^ a1^(l1-k-2) a2^l2
    for (int k = 2; k <= 4; ++k)
        for (int l2 = 1; l2 <= 2; ++l2) {
            const int l1 = k + 4;
            const std::string f1 = "a1^" + std::to_string(k) + " a4";
            const std::string f3 = "a1^" + std::to_string(l1 - k - 2) + " a2^" + std::to_string(l2);
            const std::string top = "a1^" + std::to_string(k + 2);
            CHECK(boundary(W({f1.c_str(), "a1^2 b4", f3.c_str()})) == W({top.c_str(), f3.c_str()}));
        }
}

TEST_CASE("matrix columns agree with the symbolic boundary")
{
    const ChainBasis src = ChainBasis::build(3, 3, 4);
    const ChainBasis dst = ChainBasis::build(3, 2, 4);
    const SparseMatrix d = ce_differential(src, dst);
    for (int trial = 0; trial < 20; ++trial) {
        const ChainElement x = cgtest::random_chain(src, 3);
        CHECK(from_coordinates(dst, cgplus::apply(d, coordinates(x, src))) == boundary(x));
    }
}

TEST_CASE("d o d = 0")
{
    for (int g = 1; g <= 3; ++g)
        for (int w = 2; w <= (g == 3 ? 4 : 5); ++w)
            for (int n = 2; n < w; ++n) {
                const SparseMatrix top = ce_differential(g, n + 1, w);
                const SparseMatrix bottom = ce_differential(g, n, w);
                CHECK(bottom.multiply(top).is_zero());
            }
    CHECK(ce_differential(2, 2, 3).multiply(ce_differential(2, 3, 3)).is_zero());
    const ChainBasis b = ChainBasis::build(4, 3, 4);
    for (int trial = 0; trial < 30; ++trial)
        CHECK(boundary(boundary(cgtest::random_chain(b, 4))).is_zero());
}

TEST_CASE("blocks partition the basis and are preserved by d")
{
    for (const auto& [g, n, w] : std::vector<std::tuple<int, int, int>>{{2, 2, 3}, {3, 2, 2}, {2, 3, 4}}) {
        const ChainBasis src = ChainBasis::build(g, n, w);
        const ChainBasis dst = ChainBasis::build(g, n - 1, w);
        const BlockIndex idx = block_decompose(src);
        std::size_t total = 0;
        std::vector<int> seen(src.size(), 0);
        for (const auto& [mu, cols] : idx.blocks) {
            total += cols.size();
            for (auto c : cols) {
                ++seen[c];
                CHECK(src.torus_weight_of(c) == mu);
            }
        }
        CHECK(total == src.size());
        CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
        for (const auto& [mu, d] : chain_block_dims(g, n, w))
            CHECK(idx.blocks.at(mu).size() == d.get_ui());
        const SparseMatrix m = ce_differential(src, dst);
        for (const auto& t : m.triplets())
            CHECK(dst.torus_weight_of(t.row) == src.torus_weight_of(t.col));
    }
}

TEST_CASE("single block of H1 in weight 1")
{
    const BlockIndex idx = block_decompose(ChainBasis::build(2, 1, 1));
    REQUIRE(idx.blocks.count({3, 0}));
    CHECK(idx.blocks.at({3, 0}).size() == 1);
}

TEST_CASE("block rank matches the dense rank of the restricted matrix")
{
    const ChainBasis src = ChainBasis::build(2, 2, 2);
    const SparseMatrix full = ce_differential(2, 2, 2);
    const auto cols = block_decompose(src).blocks.at({0, 0});
    const SparseMatrix restricted = full.select_columns(cols);
    const SparseMatrix block = block_differential(2, 2, 2, {0, 0}, nullptr);
    CHECK(rank_exact(block).rank == cgtest::dense_rank(restricted));
    CHECK(rank_exact(full).rank == 35);
    CHECK(cgtest::dense_rank(full) == 35);
}

TEST_CASE("Weyl symmetry helpers")
{
    CHECK(is_dominant({3, 1, 0}));
    CHECK_FALSE(is_dominant({1, 3, 0}));
    CHECK_FALSE(is_dominant({1, -1, 0}));
    CHECK(dominant_of({0, -2, 1}) == TorusWeight{2, 1, 0});
    CHECK(weyl_orbit_size({1, 0, 0}) == 6);
    CHECK(weyl_orbit({1, 1}).size() == 4);
    CHECK(parse_weight("2,0,-1") == TorusWeight{2, 0, -1});
    // block dimensions sum to the total
    for (int w = 1; w <= 4; ++w) {
        Integer total = 0;
        for (const auto& [mu, d] : chain_block_dims(3, 2, w))
            total += d;
        CHECK(total == chain_dim(3, 2, w));
    }
}

TEST_CASE("first homology")
{
    for (int g = 2; g <= 4; ++g) {
        CHECK(homology_dims(g, 1, 1).total == binomial(static_cast<unsigned>(2 * g + 2), 3));
        for (int w = 2; w <= 4; ++w)
            CHECK(homology_dims(g, 1, w).total == 0);
    }
}

TEST_CASE("dominant blocks and all blocks agree")
{
    HomologyOptions all;
    all.all_blocks = true;
    all.policy.mode = RankMode::Exact;
    const HomologyResult a = homology_dims(2, 2, 3, all);
    const HomologyResult d = homology_dims(2, 2, 3);
    CHECK(a.total == d.total);
    CHECK(a.weight_dims() == d.weight_dims());
    CHECK(a.certified);
}

TEST_CASE("rank modes agree")
{
    for (auto mode : {RankMode::Exact, RankMode::Modular, RankMode::Auto}) {
        HomologyOptions o;
        o.policy.mode = mode;
        const HomologyResult r = homology_dims(3, 2, 2, o);
        CHECK(r.certified);
        CHECK(r.total == homology_dims(3, 2, 2).total);
        CHECK(r.any_modular == (mode == RankMode::Modular));
    }
    CHECK(parse_rank_mode("modular") == RankMode::Modular);
    CHECK_THROWS_AS(parse_rank_mode("fast"), InvalidArgument);
}

TEST_CASE("single prime is not a certificate")
{
    HomologyOptions o;
    o.policy.mode = RankMode::Modular;
    o.policy.primes = {2147483647ull};
    CHECK_FALSE(homology_dims(3, 2, 2, o).certified);
}
