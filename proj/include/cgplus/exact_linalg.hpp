#pragma once

// Exact rank, kernel and linear solves for sparse matrices over Q and over
// prime fields.

#include "cgplus/sparse_matrix.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cgplus {

enum class RankMethod : std::uint8_t { ExactRational, FractionFreeInteger, Modular };
std::string to_string(RankMethod m);

struct RankCertificate {
    std::size_t rank = 0;
    RankMethod method = RankMethod::FractionFreeInteger;
    std::vector<std::uint64_t> primes;     // empty for exact methods
    std::vector<std::size_t> prime_ranks;  // rank mod each prime, same order
    /// Exact methods: always true. Modular: at least two primes attain the
    /// reported (maximal) rank.
    bool agreement = true;
};

inline constexpr std::uint64_t kDefaultPrimes[] = {2147483647ull, 2147483629ull};

struct EliminationOptions {
    /// Stop as soon as this many independent vectors are found. Only sound
    /// when the caller knows rank <= cap (e.g. from a vanishing composite).
    std::size_t rank_cap = std::numeric_limits<std::size_t>::max();
    /// Upper bound on stored pivot-row entries before giving up.
    std::size_t max_entries = 400'000'000;
    /// Modular rank: largest Schur complement (in entries) that is formed
    /// explicitly; beyond it the black-box phase takes over.
    std::size_t schur_entries = 100'000'000;
};

/// Rank over Q by fraction-free integer elimination with Markowitz-style
/// pivot preference (sparse vectors first, rarest coordinate as pivot).
/// Throws ResourceError when the entry budget is exceeded.
RankCertificate rank_exact(const SparseMatrix& m, const EliminationOptions& opts = {});

/// Rank modulo a single prime p < 2^32 by structured elimination, with a
/// black-box (Wiedemann) phase for large dense remainders. The black-box
/// phase is randomized with a fixed seed and can only err low.
std::size_t rank_mod_p(const SparseMatrix& m, std::uint64_t p, const EliminationOptions& opts = {});

/// Rank modulo each prime; the reported rank is the maximum, which is a
/// lower bound for the rank over Q.
RankCertificate rank_modular(const SparseMatrix& m, std::span<const std::uint64_t> primes,
                             const EliminationOptions& opts = {});

using SparseVector = std::vector<std::pair<std::uint32_t, Rational>>;

SparseVector apply(const SparseMatrix& m, const SparseVector& v);

/// Basis of the right kernel over Q. Every returned v satisfies M v = 0
/// (checked before returning).
std::vector<SparseVector> kernel_basis(const SparseMatrix& m, const EliminationOptions& opts = {});

/// Some x with M x = b, or nullopt when b is outside the column space.
/// The solution is verified exactly before it is returned.
std::optional<SparseVector> solve_exact(const SparseMatrix& m, const SparseVector& b,
                                        const EliminationOptions& opts = {});

}  // namespace cgplus
