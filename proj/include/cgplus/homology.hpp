#pragma once

// Per-block homology of the CE complex, rank policy, and the on-disk
// matrix cache.

#include "cgplus/chain_complex.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace cgplus {

enum class RankMode : std::uint8_t { Exact, Modular, Auto };
std::string to_string(RankMode m);
RankMode parse_rank_mode(const std::string& s);

struct RankPolicy {
    RankMode mode = RankMode::Auto;
    /// Auto mode: blocks with fewer columns than this run exact elimination
    /// (and are cross-checked modularly); larger ones run modular only.
    std::size_t exact_threshold = 2000;
    std::vector<std::uint64_t> primes{std::begin(kDefaultPrimes), std::end(kDefaultPrimes)};
    EliminationOptions elimination;
};

struct RankOutcome {
    RankCertificate cert;
    /// Auto mode ran both methods and they agreed.
    bool cross_checked = false;
};

/// A finished rank computation on one block differential.
struct RankRecord {
    std::size_t rows = 0, cols = 0;
    RankOutcome outcome;
};

/// Differential matrices stored as triplet files named by a hash of
/// (format version, g, n, w, block).
class MatrixCache {
public:
    explicit MatrixCache(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path path_for(const MatrixHeader& h) const;

    /// Loads the matrix when present. A file whose header disagrees with the
    /// key, an old format version, or a bad checksum throws FormatError.
    std::optional<SparseMatrix> load(const MatrixHeader& h) const;
    void store(const MatrixHeader& h, const SparseMatrix& m) const;

    /// Rank records kept next to the matrices so that interrupted runs
    /// resume without rebuilding or re-eliminating finished blocks.
    std::optional<RankRecord> load_rank(const MatrixHeader& h, const RankPolicy& policy) const;
    void store_rank(const MatrixHeader& h, const RankPolicy& policy, const RankRecord& r) const;

    struct Entry {
        std::filesystem::path path;
        MatrixHeader header;
        std::size_t rows = 0, cols = 0, nnz = 0;
        std::uintmax_t bytes = 0;
    };
    std::vector<Entry> list() const;
    std::size_t clear() const;

private:
    std::filesystem::path root_;
};

/// Ranks computed earlier in this process, keyed by block and policy.
class RankMemo {
public:
    std::optional<RankRecord> find(const MatrixHeader& h, const RankPolicy& policy) const;
    void put(const MatrixHeader& h, const RankPolicy& policy, const RankRecord& r);

private:
    mutable std::mutex mu_;
    std::map<std::string, RankRecord> ranks_;
};

/// Fallback cache root: $CGPLUS_CACHE or ./cache.
std::filesystem::path default_cache_root();

RankOutcome compute_rank(const SparseMatrix& m, const RankPolicy& policy, std::size_t rank_cap);

struct BlockHomology {
    TorusWeight mu;
    std::size_t orbit = 1;
    std::size_t chain_dim = 0;
    std::size_t rank_in = 0;   // rank of d_n on the block
    std::size_t rank_out = 0;  // rank of d_{n+1} into the block
    std::size_t homology = 0;
    std::optional<RankOutcome> in, out;
    bool cache_hit_in = false, cache_hit_out = false;
    double build_seconds = 0, rank_seconds = 0;
};

struct HomologyOptions {
    RankPolicy policy;
    unsigned jobs = 1;
    /// Compute every torus block instead of dominant representatives only.
    bool all_blocks = false;
    /// Only these dominant blocks (empty: all nonzero ones).
    std::vector<TorusWeight> only_blocks;
    const MatrixCache* cache = nullptr;
    RankMemo* memo = nullptr;
    std::function<void(const BlockHomology&)> on_block;
};

struct HomologyResult {
    int g = 0, n = 0, w = 0;
    bool all_blocks = false;
    std::vector<BlockHomology> blocks;  // sorted by weight, descending
    Integer total = 0;                  // summed over all torus weights
    /// Every rank is exact, or modular with at least two agreeing primes.
    bool certified = true;
    bool any_modular = false;
    double seconds = 0;

    /// Homology dimension per torus weight, expanded to Weyl orbits when
    /// only dominant blocks were computed.
    std::map<TorusWeight, Integer> weight_dims() const;
};

/// Rank of d_n restricted to a torus block, building (or loading) the
/// matrix. `n` >= 2. Results are recorded in `memo` and the cache, so
/// `rank_cap` must be a proven upper bound on the rank.
struct BlockRank {
    std::size_t rank = 0;
    std::size_t rows = 0, cols = 0;
    RankOutcome outcome;
    bool cache_hit = false;
    double build_seconds = 0, rank_seconds = 0;
};
BlockRank block_differential_rank(int g, int n, int w, const TorusWeight& mu, const RankPolicy& policy,
                                  const MatrixCache* cache, unsigned jobs = 1,
                                  std::size_t rank_cap = std::numeric_limits<std::size_t>::max(),
                                  RankMemo* memo = nullptr);

/// Builds (or loads) d_n on the block.
SparseMatrix block_differential(int g, int n, int w, const TorusWeight& mu, const MatrixCache* cache,
                                bool* cache_hit = nullptr, unsigned jobs = 1);

HomologyResult homology_dims(int g, int n, int w, const HomologyOptions& opts = {});

}  // namespace cgplus
