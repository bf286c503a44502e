#include "cgplus/sparse_matrix.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cgplus {

std::string to_string(CoeffDomain d)
{
    switch (d) {
    case CoeffDomain::Integer: return "integer";
    case CoeffDomain::Rational: return "rational";
    case CoeffDomain::Modular: return "modular";
    }
    return "?";
}

CoeffDomain parse_domain(const std::string& s)
{
    if (s == "integer")
        return CoeffDomain::Integer;
    if (s == "rational")
        return CoeffDomain::Rational;
    if (s == "modular")
        return CoeffDomain::Modular;
    throw FormatError("unknown coefficient domain '" + s + "'");
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, CoeffDomain domain, std::uint64_t modulus)
    : rows_(rows), cols_(cols), domain_(domain), modulus_(modulus), col_ptr_(cols + 1, 0)
{
    if (rows > UINT32_MAX || cols > UINT32_MAX)
        throw InvalidArgument("matrix dimensions exceed 32-bit indices");
    if (domain == CoeffDomain::Modular && modulus < 2)
        throw InvalidArgument("modular matrix needs a modulus >= 2");
}


SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries,
                                         CoeffDomain domain, std::uint64_t modulus)
{
    SparseMatrix m(rows, cols, domain, modulus);
    for (const auto& t : entries) {
        if (t.row >= rows || t.col >= cols)
            throw InvalidArgument("triplet index (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                                  ") out of range");
        if (t.den == 0)
            throw InvalidArgument("zero denominator");
        if (domain != CoeffDomain::Rational && t.den != 1)
            throw InvalidArgument("non-unit denominator in " + to_string(domain) + " matrix");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Triplet& a, const Triplet& b) { return a.col != b.col ? a.col < b.col : a.row < b.row; });

    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        const auto r = entries[i].row, c = entries[i].col;
        std::int64_t num = 0, den = 1;
        if (domain == CoeffDomain::Rational) {
            Rational acc = 0;
            for (; j < entries.size() && entries[j].row == r && entries[j].col == c; ++j)
                acc += make_rational(entries[j].num, entries[j].den);
            if (!acc.get_num().fits_slong_p() || !acc.get_den().fits_slong_p())
                throw InvalidArgument("rational entry exceeds 64-bit storage");
            num = acc.get_num().get_si();
            den = acc.get_den().get_si();
        } else if (domain == CoeffDomain::Modular) {
            const auto p = static_cast<std::int64_t>(modulus);
            for (; j < entries.size() && entries[j].row == r && entries[j].col == c; ++j)
                num = ((num + entries[j].num % p) % p + p) % p;
        } else {
            for (; j < entries.size() && entries[j].row == r && entries[j].col == c; ++j)
                if (__builtin_add_overflow(num, entries[j].num, &num))
                    throw InvalidArgument("integer entry overflow");
        }
        if (num != 0) {
            m.row_idx_.push_back(r);
            m.num_.push_back(num);
            if (domain == CoeffDomain::Rational)
                m.den_.push_back(den);
            ++m.col_ptr_[c + 1];
        }
        i = j;
    }
    for (std::size_t c = 0; c < cols; ++c)
        m.col_ptr_[c + 1] += m.col_ptr_[c];
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i)
        t.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), 1, 1});
    return from_triplets(n, n, std::move(t));
}

std::vector<Triplet> SparseMatrix::triplets() const
{
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t c = 0; c < cols_; ++c)
        for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k)
            out.push_back({row_idx_[k], static_cast<std::uint32_t>(c), num_[k], denominator(k)});
    return out;
}

SparseMatrix SparseMatrix::transpose() const
{
    auto t = triplets();
    for (auto& e : t)
        std::swap(e.row, e.col);
    return from_triplets(cols_, rows_, std::move(t), domain_, modulus_);
}

SparseMatrix SparseMatrix::select_columns(const std::vector<std::uint32_t>& cols) const
{
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] >= cols_)
            throw InvalidArgument("select_columns: index out of range");
        for (std::size_t k = col_ptr_[cols[j]]; k < col_ptr_[cols[j] + 1]; ++k)
            t.push_back({row_idx_[k], static_cast<std::uint32_t>(j), num_[k], denominator(k)});
    }
    return from_triplets(rows_, cols.size(), std::move(t), domain_, modulus_);
}

SparseMatrix SparseMatrix::permute(const std::vector<std::uint32_t>& row_perm,
                                   const std::vector<std::uint32_t>& col_perm) const
{
    if (row_perm.size() != rows_ || col_perm.size() != cols_)
        throw InvalidArgument("permute: size mismatch");
    auto t = triplets();
    for (auto& e : t) {
        e.row = row_perm[e.row];
        e.col = col_perm[e.col];
    }
    return from_triplets(rows_, cols_, std::move(t), domain_, modulus_);
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw InvalidArgument("multiply: inner dimension mismatch");
    const bool rational = domain_ == CoeffDomain::Rational || rhs.domain_ == CoeffDomain::Rational;
    std::vector<Triplet> out;
    std::map<std::uint32_t, Rational> acc;
    std::vector<std::vector<std::pair<std::uint32_t, Rational>>> lhs_cols(cols_);
    for (std::size_t c = 0; c < cols_; ++c)
        for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k)
            lhs_cols[c].emplace_back(row_idx_[k], value(k));
    for (std::size_t j = 0; j < rhs.cols_; ++j) {
        acc.clear();
        for (std::size_t k = rhs.col_ptr_[j]; k < rhs.col_ptr_[j + 1]; ++k) {
            const Rational v = rhs.value(k);
            for (const auto& [r, a] : lhs_cols[rhs.row_idx_[k]])
                acc[r] += a * v;
        }
        for (const auto& [r, v] : acc) {
            if (v == 0)
                continue;
            if (!v.get_num().fits_slong_p() || !v.get_den().fits_slong_p())
                throw InvalidArgument("multiply: entry exceeds 64-bit storage");
            out.push_back({r, static_cast<std::uint32_t>(j), v.get_num().get_si(), v.get_den().get_si()});
        }
    }
    return from_triplets(rows_, rhs.cols_, std::move(out), rational ? CoeffDomain::Rational : CoeffDomain::Integer);
}

bool SparseMatrix::operator==(const SparseMatrix& o) const
{
    return rows_ == o.rows_ && cols_ == o.cols_ && domain_ == o.domain_ && modulus_ == o.modulus_ &&
           col_ptr_ == o.col_ptr_ && row_idx_ == o.row_idx_ && num_ == o.num_ && den_ == o.den_;
}

SparseMatrix TripletBuilder::build() &&
{
    return SparseMatrix::from_triplets(rows_, cols_, std::move(entries_));
}

// ---------------------------------------------------------------------------
// File format

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

void fnv_update(std::uint64_t& h, const std::string& s)
{
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    h ^= '\n';
    h *= kFnvPrime;
}

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

[[noreturn]] void bad(const std::string& source, const std::string& what)
{
    throw FormatError(source + ": " + what);
}

}  // namespace

void write_triplets(std::ostream& os, const SparseMatrix& m, const MatrixHeader& h)
{
    os << "cgplus-triplet " << kTripletFormatVersion << "\n";
    os << "g " << h.g << " n " << h.n << " w " << h.w << " block " << h.block << "\n";
    os << "rows " << m.rows() << " cols " << m.cols() << " domain " << to_string(m.domain()) << " modulus "
       << m.modulus() << " nnz " << m.nnz() << "\n";
    std::uint64_t hash = kFnvOffset;
    std::string line;
    for (const auto& t : m.triplets()) {
        line = std::to_string(t.row) + " " + std::to_string(t.col) + " " + std::to_string(t.num) + " " +
               std::to_string(t.den);
        fnv_update(hash, line);
        os << line << "\n";
    }
    os << "end " << hex64(hash) << "\n";
}

SparseMatrix read_triplets(std::istream& is, MatrixHeader* header_out, const std::string& source)
{
    std::string line, tag;
    if (!std::getline(is, line))
        bad(source, "empty file");
    {
        std::istringstream ls(line);
        int version = -1;
        if (!(ls >> tag >> version) || tag != "cgplus-triplet")
            bad(source, "missing cgplus-triplet header");
        if (version != kTripletFormatVersion)
            bad(source, "format version " + std::to_string(version) + " does not match supported version " +
                            std::to_string(kTripletFormatVersion) + "; rebuild the cache");
    }
    MatrixHeader h;
    {
        if (!std::getline(is, line))
            bad(source, "truncated header");
        std::istringstream ls(line);
        std::string tg, tn, tw, tb;
        if (!(ls >> tg >> h.g >> tn >> h.n >> tw >> h.w >> tb >> h.block) || tg != "g" || tn != "n" || tw != "w" ||
            tb != "block")
            bad(source, "malformed key line");
    }
    std::size_t rows = 0, cols = 0, nnz = 0;
    std::uint64_t modulus = 0;
    std::string dom;
    {
        if (!std::getline(is, line))
            bad(source, "truncated header");
        std::istringstream ls(line);
        std::string tr, tc, td, tm, tn;
        if (!(ls >> tr >> rows >> tc >> cols >> td >> dom >> tm >> modulus >> tn >> nnz) || tr != "rows" ||
            tc != "cols" || td != "domain" || tm != "modulus" || tn != "nnz")
            bad(source, "malformed dimension line");
    }
    CoeffDomain domain;
    try {
        domain = parse_domain(dom);
    } catch (const FormatError& e) {
        bad(source, e.what());
    }
    std::vector<Triplet> entries;
    entries.reserve(nnz);
    std::uint64_t hash = kFnvOffset;
    for (std::size_t i = 0; i < nnz; ++i) {
        if (!std::getline(is, line))
            bad(source, "truncated after " + std::to_string(i) + " of " + std::to_string(nnz) + " records");
        std::istringstream ls(line);
        long long r, c, num, den;
        if (!(ls >> r >> c >> num >> den) || r < 0 || c < 0)
            bad(source, "malformed record at line " + std::to_string(i + 4));
        fnv_update(hash, line);
        entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), num, den});
    }
    if (!std::getline(is, line))
        bad(source, "missing end marker");
    {
        std::istringstream ls(line);
        std::string te, hx;
        if (!(ls >> te >> hx) || te != "end")
            bad(source, "missing end marker");
        if (hx != hex64(hash))
            bad(source, "checksum mismatch (file corrupted)");
    }
    if (header_out)
        *header_out = h;
    try {
        return SparseMatrix::from_triplets(rows, cols, std::move(entries), domain, modulus);
    } catch (const InvalidArgument& e) {
        bad(source, e.what());
    }
}

void save_triplets(const std::filesystem::path& path, const SparseMatrix& m, const MatrixHeader& h)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp);
        if (!os)
            throw Error("cannot write " + tmp.string());
        write_triplets(os, m, h);
        if (!os)
            throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

SparseMatrix load_triplets(const std::filesystem::path& path, MatrixHeader* header_out)
{
    std::ifstream is(path);
    if (!is)
        throw FormatError(path.string() + ": cannot open");
    return read_triplets(is, header_out, path.string());
}

}  // namespace cgplus
