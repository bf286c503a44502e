#pragma once

#include "cgplus/errors.hpp"
#include "cgplus/rational.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cgplus {

enum class CoeffDomain : std::uint8_t { Integer, Rational, Modular };

std::string to_string(CoeffDomain d);
CoeffDomain parse_domain(const std::string& s);

struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    std::int64_t num;
    std::int64_t den = 1;
};

/// Sparse matrix in compressed-column form with small exact coefficients.
/// No stored zeros; entries of each column sorted by row.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, CoeffDomain domain = CoeffDomain::Integer,
                 std::uint64_t modulus = 0);

    /// Duplicates are summed; zeros dropped. Validates ranges and domain.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries,
                                      CoeffDomain domain = CoeffDomain::Integer, std::uint64_t modulus = 0);
    static SparseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return row_idx_.size(); }
    CoeffDomain domain() const { return domain_; }
    std::uint64_t modulus() const { return modulus_; }

    std::size_t col_begin(std::size_t c) const { return col_ptr_[c]; }
    std::size_t col_end(std::size_t c) const { return col_ptr_[c + 1]; }
    std::uint32_t row_index(std::size_t k) const { return row_idx_[k]; }
    std::int64_t numerator(std::size_t k) const { return num_[k]; }
    std::int64_t denominator(std::size_t k) const { return den_.empty() ? 1 : den_[k]; }
    Rational value(std::size_t k) const { return make_rational(numerator(k), denominator(k)); }

    std::vector<Triplet> triplets() const;
    SparseMatrix transpose() const;
    /// Columns reordered: result column j is source column perm[j].
    SparseMatrix select_columns(const std::vector<std::uint32_t>& cols) const;
    SparseMatrix permute(const std::vector<std::uint32_t>& row_perm, const std::vector<std::uint32_t>& col_perm) const;

    /// Exact product over Q (modular matrices are treated as their integer
    /// representatives).
    SparseMatrix multiply(const SparseMatrix& rhs) const;
    bool is_zero() const { return nnz() == 0; }

    bool operator==(const SparseMatrix& o) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    CoeffDomain domain_ = CoeffDomain::Integer;
    std::uint64_t modulus_ = 0;
    std::vector<std::size_t> col_ptr_{0};
    std::vector<std::uint32_t> row_idx_;
    std::vector<std::int64_t> num_;
    std::vector<std::int64_t> den_;  // empty unless Rational
};

/// Column-wise accumulator used while streaming differential columns.
class TripletBuilder {
public:
    TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
    void add(std::uint32_t row, std::uint32_t col, std::int64_t v)
    {
        if (v != 0)
            entries_.push_back({row, col, v, 1});
    }
    std::size_t size() const { return entries_.size(); }
    SparseMatrix build() &&;

private:
    std::size_t rows_, cols_;
    std::vector<Triplet> entries_;
};

// ---------------------------------------------------------------------------
// Versioned triplet file format.
//
//   cgplus-triplet <version>
//   g <g> n <n> w <w> block <m_1,...,m_g|all>
//   rows <R> cols <C> domain <integer|rational|modular> modulus <p> nnz <N>
//   <row> <col> <num> <den>            (N lines, col-major)
//   end <fnv1a-64 of the record lines, hex>

inline constexpr int kTripletFormatVersion = 1;

struct MatrixHeader {
    int version = kTripletFormatVersion;
    int g = 0;
    int n = 0;
    int w = 0;
    std::string block = "all";
};

void write_triplets(std::ostream& os, const SparseMatrix& m, const MatrixHeader& h);
SparseMatrix read_triplets(std::istream& is, MatrixHeader* header_out = nullptr,
                           const std::string& source_name = "<stream>");

/// Atomic write (temp file + rename).
void save_triplets(const std::filesystem::path& path, const SparseMatrix& m, const MatrixHeader& h);
SparseMatrix load_triplets(const std::filesystem::path& path, MatrixHeader* header_out = nullptr);

}  // namespace cgplus
