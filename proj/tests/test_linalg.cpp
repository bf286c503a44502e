#include <doctest.h>

#include "cgplus/exact_linalg.hpp"
#include "cgplus/homology.hpp"
#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

using namespace cgplus;

namespace {

SparseMatrix random_matrix(std::size_t rows, std::size_t cols, double density, int bound)
{
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (std::uniform_real_distribution<double>(0, 1)(cgtest::rng()) < density)
                t.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), cgtest::uniform(-bound, bound)});
    return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

SparseMatrix low_rank(std::size_t n, std::size_t r)
{
    return random_matrix(n, r, 0.5, 4).multiply(random_matrix(r, n, 0.5, 4));
}

std::vector<std::uint32_t> shuffled(std::size_t n)
{
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    std::shuffle(p.begin(), p.end(), cgtest::rng());
    return p;
}

}  // namespace

TEST_CASE("sparse matrix construction")
{
    const SparseMatrix m = SparseMatrix::from_triplets(2, 3, {{0, 1, 2}, {0, 1, 3}, {1, 2, 4}, {1, 0, 0}});
    CHECK(m.nnz() == 2);
    CHECK(m.transpose().transpose() == m);
    CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1}}), InvalidArgument);
    const SparseMatrix id = SparseMatrix::identity(3);
    CHECK(id.multiply(m.transpose()) == m.transpose());
}

TEST_CASE("rank of trivial matrices")
{
    CHECK(rank_exact(SparseMatrix(4, 7)).rank == 0);
    CHECK(rank_exact(SparseMatrix::identity(5)).rank == 5);
    CHECK(rank_exact(SparseMatrix::identity(5)).method == RankMethod::FractionFreeInteger);
}

TEST_CASE("modular rank sees the prime")
{
    const std::uint64_t p = 2147483647ull, q = 2147483629ull;
    const SparseMatrix m = SparseMatrix::from_triplets(1, 1, {{0, 0, static_cast<std::int64_t>(p)}});
    CHECK(rank_mod_p(m, p) == 0);
    CHECK(rank_mod_p(m, q) == 1);
    const std::uint64_t primes[] = {p, q};
    const RankCertificate c = rank_modular(m, primes);
    CHECK(c.rank == 1);
    CHECK(c.prime_ranks == std::vector<std::size_t>{0, 1});
    CHECK_FALSE(c.agreement);
}

TEST_CASE("modular rank agrees with exact rank on random matrices")
{
    for (int trial = 0; trial < 5; ++trial) {
        const SparseMatrix m = low_rank(50, static_cast<std::size_t>(cgtest::uniform(10, 45)));
        const RankCertificate e = rank_exact(m);
        const RankCertificate mod = rank_modular(m, kDefaultPrimes);
        CHECK(mod.rank == e.rank);
        CHECK(mod.agreement);
        CHECK(e.rank == cgtest::dense_rank(m));
    }
}

TEST_CASE("rank mod p never exceeds the rational rank")
{
    for (int trial = 0; trial < 8; ++trial) {
        const auto rows = static_cast<std::size_t>(cgtest::uniform(20, 200));
        const auto cols = static_cast<std::size_t>(cgtest::uniform(20, 200));
        const SparseMatrix m = random_matrix(rows, cols, 0.05, 6);
        const std::size_t r = rank_exact(m).rank;
        for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 2147483647ull})
            CHECK(rank_mod_p(m, p) <= r);
    }
}

TEST_CASE("black-box phase agrees with elimination")
{
    EliminationOptions bb;
    bb.schur_entries = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const auto rows = static_cast<std::size_t>(cgtest::uniform(5, 160));
        const auto cols = static_cast<std::size_t>(cgtest::uniform(5, 160));
        const SparseMatrix m = trial % 3 == 0 ? low_rank(std::min(rows, cols), std::min(rows, cols) / 3)
                                              : random_matrix(rows, cols, trial % 2 ? 0.3 : 0.03, 5);
        const std::size_t r = rank_exact(m).rank;
        CHECK(rank_mod_p(m, 2147483647ull, bb) == r);
        CHECK(rank_mod_p(m, 2147483629ull, bb) == r);
        for (std::uint64_t q : {2ull, 3ull, 7ull})
            CHECK(rank_mod_p(m, q, bb) <= r);
    }
    // differentials whose leading-entry pivots leave a large remainder
    for (const auto& [mu, d] : chain_block_dims(3, 3, 3)) {
        if (!is_dominant(mu) || d > 4000)
            continue;
        const SparseMatrix m = block_differential(3, 3, 3, mu, nullptr);
        const std::size_t r = rank_mod_p(m, 2147483647ull);
        CHECK(rank_mod_p(m, 2147483647ull, bb) == r);
        EliminationOptions capped = bb;
        capped.rank_cap = r;
        CHECK(rank_mod_p(m, 2147483647ull, capped) == r);
    }
}

TEST_CASE("rank is invariant under permutations")
{
    for (int trial = 0; trial < 5; ++trial) {
        const SparseMatrix m = low_rank(40, 17);
        const SparseMatrix pm = m.permute(shuffled(m.rows()), shuffled(m.cols()));
        CHECK(rank_exact(pm).rank == rank_exact(m).rank);
        CHECK(rank_mod_p(pm, 2147483629ull) == rank_mod_p(m, 2147483629ull));
    }
}

TEST_CASE("rational entries")
{
    const SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{0, 0, 1, 2}, {0, 1, 1, 3}, {1, 0, 3, 1}, {1, 1, 2, 1}},
                                                       CoeffDomain::Rational);
    CHECK(rank_exact(m).rank == 1);
    CHECK(cgtest::dense_rank(m) == 1);
}

TEST_CASE("kernel basis")
{
    CHECK(kernel_basis(SparseMatrix::identity(4)).empty());
    const SparseMatrix row = SparseMatrix::from_triplets(1, 2, {{0, 0, 1}, {0, 1, 1}});
    const auto k = kernel_basis(row);
    REQUIRE(k.size() == 1);
    REQUIRE(k[0].size() == 2);
    CHECK(k[0][0].second == -k[0][1].second);
    for (int trial = 0; trial < 3; ++trial) {
        const SparseMatrix m = low_rank(30, 12);
        const auto ker = kernel_basis(m);
        CHECK(ker.size() == m.cols() - rank_exact(m).rank);
        for (const auto& v : ker)
            CHECK(cgplus::apply(m, v).empty());
    }
}

TEST_CASE("kernel of d2 in weight 2 for g = 4")
{
    const SparseMatrix d = ce_differential(4, 2, 2);
    CHECK(d.cols() == 7140);
    CHECK(d.rows() == 330);
    CHECK(d.cols() - rank_exact(d).rank == 6810);
}

TEST_CASE("exact solve")
{
    const SparseMatrix m = SparseMatrix::from_triplets(3, 2, {{0, 0, 2}, {1, 1, 3}, {2, 0, 1}, {2, 1, 1}});
    const SparseVector b{{0, 4}, {1, 9}, {2, 5}};
    const auto x = solve_exact(m, b);
    REQUIRE(x);
    CHECK((cgplus::apply(m, *x) == b));
    CHECK_FALSE(solve_exact(m, SparseVector{{0, 1}}));
}

TEST_CASE("triplet format round trip")
{
    const SparseMatrix m = random_matrix(13, 9, 0.3, 100);
    MatrixHeader h;
    h.g = 3;
    h.n = 2;
    h.w = 4;
    h.block = "1,0,0";
    std::stringstream ss;
    write_triplets(ss, m, h);
    MatrixHeader back;
    CHECK(read_triplets(ss, &back) == m);
    CHECK(back.block == "1,0,0");
    CHECK(back.w == 4);

    std::string text;
    {
        std::stringstream s2;
        write_triplets(s2, m, h);
        text = s2.str();
    }
    std::string broken = text;
    broken[broken.find("\n", broken.find("nnz")) + 1] = '9';
    std::istringstream bad(broken);
    CHECK_THROWS_AS(read_triplets(bad), FormatError);
    std::istringstream truncated(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(read_triplets(truncated), FormatError);
}

TEST_CASE("matrix cache")
{
    const auto root = std::filesystem::temp_directory_path() / "cgplus-test-cache";
    std::filesystem::remove_all(root);
    const MatrixCache cache(root);
    MatrixHeader h;
    h.g = 2;
    h.n = 2;
    h.w = 2;
    h.block = "0,0";
    CHECK_FALSE(cache.load(h));
    bool hit = true;
    const SparseMatrix built = block_differential(2, 2, 2, {0, 0}, &cache, &hit);
    CHECK_FALSE(hit);
    CHECK(cache.list().size() == 1);
    const SparseMatrix again = block_differential(2, 2, 2, {0, 0}, &cache, &hit);
    CHECK(hit);
    CHECK(again == built);

    // a corrupted file is reported with its name
    {
        std::ofstream out(cache.path_for(h), std::ios::trunc);
        out << "cgplus-triplet 1\ngarbage\n";
    }
    CHECK_THROWS_AS(cache.load(h), FormatError);
    try {
        block_differential(2, 2, 2, {0, 0}, &cache, &hit);
        FAIL("corrupted cache file accepted");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find(cache.path_for(h).filename().string()) != std::string::npos);
    }
    CHECK(cache.clear() == 1);
    CHECK(cache.list().empty());
    std::filesystem::remove_all(root);
}

TEST_CASE("rank records")
{
    const auto root = std::filesystem::temp_directory_path() / "cgplus-test-ranks";
    std::filesystem::remove_all(root);
    const MatrixCache cache(root);
    RankPolicy modular;
    modular.mode = RankMode::Modular;
    const BlockRank first = block_differential_rank(2, 2, 2, {0, 0}, modular, &cache);
    CHECK_FALSE(first.cache_hit);
    MatrixHeader h;
    h.g = 2;
    h.n = 2;
    h.w = 2;
    h.block = "0,0";
    const auto rec = cache.load_rank(h, modular);
    REQUIRE(rec);
    CHECK(rec->outcome.cert.rank == first.rank);
    CHECK(rec->outcome.cert.prime_ranks == first.outcome.cert.prime_ranks);
    CHECK(rec->cols == first.cols);
    CHECK_FALSE(cache.load_rank(h, RankPolicy{}));

    // the record is used without touching the matrix
    std::filesystem::remove(cache.path_for(h));
    const BlockRank second = block_differential_rank(2, 2, 2, {0, 0}, modular, &cache);
    CHECK(second.cache_hit);
    CHECK(second.rank == first.rank);

    RankMemo memo;
    const BlockRank third = block_differential_rank(2, 2, 2, {0, 0}, RankPolicy{}, nullptr, 1, SIZE_MAX, &memo);
    CHECK_FALSE(third.cache_hit);
    CHECK(memo.find(h, RankPolicy{}));
    CHECK(block_differential_rank(2, 2, 2, {0, 0}, RankPolicy{}, nullptr, 1, SIZE_MAX, &memo).cache_hit);

    CHECK(cache.clear() == 1);
    std::filesystem::remove_all(root);
}
