#include "cgplus/exact_linalg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>

namespace cgplus {

std::string to_string(RankMethod m)
{
    switch (m) {
    case RankMethod::ExactRational: return "exact-rational";
    case RankMethod::FractionFreeInteger: return "fraction-free-integer";
    case RankMethod::Modular: return "modular";
    }
    return "?";
}

namespace {

/// The matrix viewed as a list of sparse vectors of length `dim`: its
/// columns when rows <= cols, its rows otherwise.
struct VectorList {
    std::size_t dim = 0;
    std::size_t count = 0;
    std::vector<std::size_t> ptr{0};
    std::vector<std::uint32_t> idx;
    std::vector<std::int64_t> num;
    std::vector<std::int64_t> den;

    std::size_t size(std::size_t v) const { return ptr[v + 1] - ptr[v]; }
};

VectorList shorter_vectors(const SparseMatrix& m)
{
    const SparseMatrix* src = &m;
    SparseMatrix t;
    if (m.rows() > m.cols()) {
        t = m.transpose();
        src = &t;
    }
    VectorList vl;
    vl.dim = src->rows();
    vl.count = src->cols();
    vl.ptr.reserve(vl.count + 1);
    vl.idx.reserve(src->nnz());
    vl.num.reserve(src->nnz());
    vl.den.reserve(src->nnz());
    for (std::size_t c = 0; c < src->cols(); ++c) {
        for (std::size_t k = src->col_begin(c); k < src->col_end(c); ++k) {
            vl.idx.push_back(src->row_index(k));
            vl.num.push_back(src->numerator(k));
            vl.den.push_back(src->denominator(k));
        }
        vl.ptr.push_back(vl.idx.size());
    }
    return vl;
}

/// Sparse vectors first; within equal sizes keep the original order.
std::vector<std::uint32_t> sparse_first_order(const VectorList& vl)
{
    std::vector<std::uint32_t> order(vl.count);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return vl.size(a) < vl.size(b); });
    return order;
}

std::vector<std::uint32_t> coordinate_counts(const VectorList& vl)
{
    std::vector<std::uint32_t> cnt(vl.dim, 0);
    for (auto i : vl.idx)
        ++cnt[i];
    return cnt;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return (a * b) % p; }

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p)
{
    std::uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

bool is_prime_u32(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull})
        if (n % q == 0)
            return n == q;
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 7ull, 61ull}) {
        if (a % n == 0)
            continue;
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::uint64_t residue(std::int64_t num, std::int64_t den, std::uint64_t p)
{
    const auto sp = static_cast<std::int64_t>(p);
    std::uint64_t n = static_cast<std::uint64_t>(((num % sp) + sp) % sp);
    if (den == 1)
        return n;
    const std::uint64_t d = static_cast<std::uint64_t>(((den % sp) + sp) % sp);
    if (d == 0)
        throw InvalidArgument("denominator divisible by the prime " + std::to_string(p));
    return mulmod(n, powmod(d, p - 2, p), p);
}

using MinHeap = std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>>;

}  // namespace

// ---------------------------------------------------------------------------
// Modular rank
//
// Each round takes the rows whose leading entries sit in distinct columns
// (after ordering columns by count) as pivots without any arithmetic, and
// continues with the Schur complement of the remaining rows. When the
// complement would exceed the entry budget, its rank is read off the
// minimal polynomial of a preconditioned symmetric black box built from
// sparse triangular solves. That polynomial divides the true one, so the
// result never exceeds the rank mod p.

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct ModRows {
    u32 cols = 0;
    std::vector<std::size_t> ptr{0};
    std::vector<u32> idx;
    std::vector<u32> val;

    std::size_t rows() const { return ptr.size() - 1; }
    std::size_t size(std::size_t r) const { return ptr[r + 1] - ptr[r]; }
};

/// Rows of the result run along the shorter side of `m`.
ModRows to_mod_rows(const SparseMatrix& m, u64 p)
{
    const SparseMatrix* src = &m;
    SparseMatrix t;
    if (m.rows() <= m.cols()) {
        t = m.transpose();
        src = &t;
    }
    ModRows a;
    a.cols = static_cast<u32>(src->rows());
    a.ptr.reserve(src->cols() + 1);
    a.idx.reserve(src->nnz());
    a.val.reserve(src->nnz());
    for (std::size_t c = 0; c < src->cols(); ++c) {
        for (std::size_t k = src->col_begin(c); k < src->col_end(c); ++k)
            if (const u64 v = residue(src->numerator(k), src->denominator(k), p)) {
                a.idx.push_back(src->row_index(k));
                a.val.push_back(static_cast<u32>(v));
            }
        a.ptr.push_back(a.idx.size());
    }
    return a;
}

/// Relabels columns so that sparse columns come first and sorts each row.
void order_columns(ModRows& a)
{
    std::vector<u32> cnt(a.cols, 0);
    for (u32 c : a.idx)
        ++cnt[c];
    std::vector<u32> order(a.cols);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](u32 x, u32 y) { return cnt[x] < cnt[y]; });
    std::vector<u32> label(a.cols);
    for (u32 i = 0; i < a.cols; ++i)
        label[order[i]] = i;
    std::vector<std::pair<u32, u32>> row;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        row.clear();
        for (std::size_t k = a.ptr[r]; k < a.ptr[r + 1]; ++k)
            row.emplace_back(label[a.idx[k]], a.val[k]);
        std::sort(row.begin(), row.end());
        for (std::size_t k = 0; k < row.size(); ++k) {
            a.idx[a.ptr[r] + k] = row[k].first;
            a.val[a.ptr[r] + k] = row[k].second;
        }
    }
}

/// For each column, the shortest row whose leading entry is there (or -1).
std::vector<std::int64_t> leading_pivots(const ModRows& a)
{
    std::vector<std::int64_t> piv(a.cols, -1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (a.size(r) == 0)
            continue;
        const u32 j = a.idx[a.ptr[r]];
        if (piv[j] < 0 || a.size(r) < a.size(static_cast<std::size_t>(piv[j])))
            piv[j] = static_cast<std::int64_t>(r);
    }
    return piv;
}

/// Schur complement of the non-pivot rows, on the non-pivot columns.
/// Returns nullopt once it would hold more than `budget` entries.
std::optional<ModRows> schur_complement(const ModRows& a, const std::vector<std::int64_t>& piv,
                                        const std::vector<char>& is_piv, u64 p, std::size_t budget)
{
    std::vector<u64> inv(a.rows(), 0);
    for (u32 j = 0; j < a.cols; ++j)
        if (piv[j] >= 0)
            inv[static_cast<std::size_t>(piv[j])] = powmod(a.val[a.ptr[static_cast<std::size_t>(piv[j])]], p - 2, p);
    ModRows s;
    std::vector<u32> label(a.cols, 0);
    for (u32 j = 0; j < a.cols; ++j)
        if (piv[j] < 0)
            label[j] = s.cols++;
    std::vector<u64> x(a.cols, 0);
    std::vector<char> mark(a.cols, 0);
    std::vector<u32> touched;
    MinHeap heap;
    auto touch = [&](u32 c) {
        if (!mark[c]) {
            mark[c] = 1;
            touched.push_back(c);
            if (piv[c] >= 0)
                heap.push(c);
        }
    };
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (is_piv[r] || a.size(r) == 0)
            continue;
        touched.clear();
        for (std::size_t k = a.ptr[r]; k < a.ptr[r + 1]; ++k) {
            touch(a.idx[k]);
            x[a.idx[k]] = a.val[k];
        }
        // pivot rows only reach columns after their leading one
        while (!heap.empty()) {
            const u32 c = heap.top();
            heap.pop();
            if (x[c] == 0)
                continue;
            const auto pr = static_cast<std::size_t>(piv[c]);
            const u64 f = p - mulmod(x[c], inv[pr], p);
            for (std::size_t k = a.ptr[pr]; k < a.ptr[pr + 1]; ++k) {
                const u32 d = a.idx[k];
                touch(d);
                x[d] = (x[d] + f * a.val[k]) % p;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (u32 c : touched) {
            if (x[c] != 0 && piv[c] < 0) {
                s.idx.push_back(label[c]);
                s.val.push_back(static_cast<u32>(x[c]));
            }
            x[c] = 0;
            mark[c] = 0;
        }
        if (s.idx.size() > budget)
            return std::nullopt;
        if (s.idx.size() > s.ptr.back())
            s.ptr.push_back(s.idx.size());
    }
    return s;
}

/// Online Berlekamp-Massey over F_p.
class LinearComplexity {
public:
    explicit LinearComplexity(u64 p) : p_(p) {}

    void push(u64 term)
    {
        seq_.push_back(term);
        const std::size_t n = seq_.size() - 1;
        u128 acc = term;
        for (std::size_t i = 1; i <= len_ && i < c_.size(); ++i)
            acc += static_cast<u128>(c_[i]) * seq_[n - i];
        const u64 d = static_cast<u64>(acc % p_);
        if (d == 0) {
            ++shift_;
            ++quiet_;
            return;
        }
        quiet_ = 0;
        const u64 coef = mulmod(d, powmod(b_, p_ - 2, p_), p_);
        const std::vector<u64> prev = c_;
        if (c_.size() < b_poly_.size() + shift_)
            c_.resize(b_poly_.size() + shift_, 0);
        for (std::size_t i = 0; i < b_poly_.size(); ++i)
            c_[i + shift_] = (c_[i + shift_] + p_ - mulmod(coef, b_poly_[i], p_)) % p_;
        if (2 * len_ <= n) {
            len_ = n + 1 - len_;
            b_poly_ = prev;
            b_ = d;
            shift_ = 1;
        } else {
            ++shift_;
        }
    }

    std::size_t length() const { return len_; }
    std::size_t terms() const { return seq_.size(); }
    std::size_t quiet() const { return quiet_; }

    /// Degree of the generator with its factors of x removed.
    std::size_t unit_part_degree() const
    {
        std::size_t e = 0;
        while (e < len_ && (len_ - e >= c_.size() || c_[len_ - e] == 0))
            ++e;
        return len_ - e;
    }

private:
    u64 p_;
    std::vector<u64> seq_;
    std::vector<u64> c_{1}, b_poly_{1};
    u64 b_ = 1;
    std::size_t len_ = 0, shift_ = 1, quiet_ = 0;
};

/// Rank of the Schur complement of `a` with respect to its leading pivots,
/// never above the true value. `bound` caps the rank when known.
std::size_t black_box_schur_rank(const ModRows& a, const std::vector<std::int64_t>& piv,
                                 const std::vector<char>& is_piv, u64 p, std::size_t bound)
{
    std::vector<u32> prow;  // by increasing leading column
    for (u32 j = 0; j < a.cols; ++j)
        if (piv[j] >= 0)
            prow.push_back(static_cast<u32>(piv[j]));
    std::vector<u32> srow;
    for (std::size_t r = 0; r < a.rows(); ++r)
        if (!is_piv[r] && a.size(r) > 0)
            srow.push_back(static_cast<u32>(r));
    std::vector<u32> scol;
    std::vector<std::int64_t> scol_of(a.cols, -1);
    for (u32 j = 0; j < a.cols; ++j)
        if (piv[j] < 0) {
            scol_of[j] = static_cast<std::int64_t>(scol.size());
            scol.push_back(j);
        }
    const std::size_t ms = srow.size(), ns = scol.size();
    bound = std::min({bound, ms, ns});
    if (bound == 0)
        return 0;
    std::vector<u64> dinv(a.rows(), 0);
    for (u32 r : prow)
        dinv[r] = powmod(a.val[a.ptr[r]], p - 2, p);

    // column-major copy for the transposed product
    std::vector<std::size_t> cptr(a.cols + 1, 0);
    for (u32 c : a.idx)
        ++cptr[c + 1];
    for (u32 c = 0; c < a.cols; ++c)
        cptr[c + 1] += cptr[c];
    std::vector<u32> crow(a.idx.size()), cval(a.idx.size());
    {
        std::vector<std::size_t> fill(cptr.begin(), cptr.end() - 1);
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t k = a.ptr[r]; k < a.ptr[r + 1]; ++k) {
                crow[fill[a.idx[k]]] = static_cast<u32>(r);
                cval[fill[a.idx[k]]++] = a.val[k];
            }
    }

    // S v = A22 v - A21 A11^{-1} A12 v, for v on the non-pivot columns
    std::vector<u64> u(a.cols, 0);
    auto apply_s = [&](const std::vector<u64>& v, std::vector<u64>& out) {
        for (std::size_t b = 0; b < ns; ++b)
            u[scol[b]] = v[b];
        for (std::size_t i = prow.size(); i-- > 0;) {
            const u32 r = prow[i];
            u128 acc = 0;
            for (std::size_t k = a.ptr[r] + 1; k < a.ptr[r + 1]; ++k)
                acc += static_cast<u128>(a.val[k]) * u[a.idx[k]];
            u[a.idx[a.ptr[r]]] = mulmod((p - static_cast<u64>(acc % p)) % p, dinv[r], p);
        }
        for (std::size_t i = 0; i < ms; ++i) {
            const u32 r = srow[i];
            u128 acc = 0;
            for (std::size_t k = a.ptr[r]; k < a.ptr[r + 1]; ++k)
                acc += static_cast<u128>(a.val[k]) * u[a.idx[k]];
            out[i] = static_cast<u64>(acc % p);
        }
    };
    // S^T w, one pass over columns in increasing order; z holds w on the
    // non-pivot rows and the solved values on pivot rows
    std::vector<u64> z(a.rows(), 0);
    auto apply_st = [&](const std::vector<u64>& w, std::vector<u64>& out) {
        for (std::size_t i = 0; i < ms; ++i)
            z[srow[i]] = w[i];
        for (u32 c = 0; c < a.cols; ++c) {
            const bool pivotal = piv[c] >= 0;
            const auto self = pivotal ? static_cast<u32>(piv[c]) : 0u;
            u128 acc = 0;
            for (std::size_t k = cptr[c]; k < cptr[c + 1]; ++k)
                if (!pivotal || crow[k] != self)
                    acc += static_cast<u128>(cval[k]) * z[crow[k]];
            const u64 y = static_cast<u64>(acc % p);
            if (pivotal)
                z[self] = mulmod((p - y) % p, dinv[self], p);
            else
                out[static_cast<std::size_t>(scol_of[c])] = y;
        }
    };

    // B = D1 S D2 S^T D1 (or the transposed form on the smaller side) is
    // symmetric, so v_i . v_j depends on i + j only and one product yields
    // two sequence terms
    std::mt19937_64 gen(p ^ (static_cast<u64>(a.rows()) << 32) ^ a.cols);
    auto random_unit = [&] { return gen() % (p - 1) + 1; };
    const bool left = ms <= ns;
    const std::size_t dim = left ? ms : ns, other = left ? ns : ms;
    std::vector<u64> d1(dim), d2(other);
    for (auto& x : d1)
        x = random_unit();
    for (auto& x : d2)
        x = random_unit();
    std::vector<u64> v(dim), next(dim), w(dim), mid(other);
    for (auto& x : v)
        x = random_unit();
    auto dot = [&](const std::vector<u64>& x, const std::vector<u64>& y) {
        u128 acc = 0;
        for (std::size_t i = 0; i < dim; ++i)
            acc += static_cast<u128>(x[i]) * y[i];
        return static_cast<u64>(acc % p);
    };
    LinearComplexity lc(p);
    // deg minpoly(B) <= rank(B) + 1 <= bound + 1
    const std::size_t max_terms = 2 * (bound + 1);
    lc.push(dot(v, v));
    while (lc.terms() < max_terms) {
        for (std::size_t i = 0; i < dim; ++i)
            w[i] = mulmod(v[i], d1[i], p);
        if (left)
            apply_st(w, mid);
        else
            apply_s(w, mid);
        for (std::size_t i = 0; i < other; ++i)
            mid[i] = mulmod(mid[i], d2[i], p);
        if (left)
            apply_s(mid, next);
        else
            apply_st(mid, next);
        for (std::size_t i = 0; i < dim; ++i)
            next[i] = mulmod(next[i], d1[i], p);
        lc.push(dot(v, next));
        if (lc.terms() < max_terms)
            lc.push(dot(next, next));
        v.swap(next);
        if (lc.quiet() >= 64 && lc.terms() >= 2 * lc.length() + 64)
            break;
    }
    return std::min(lc.unit_part_degree(), bound);
}

}  // namespace

std::size_t rank_mod_p(const SparseMatrix& m, std::uint64_t p, const EliminationOptions& opts)
{
    if (p >= (1ull << 32) || !is_prime_u32(p))
        throw InvalidArgument("modulus " + std::to_string(p) + " is not a prime below 2^32");
    struct Level {
        ModRows a;
        std::vector<std::int64_t> piv;
        std::vector<char> is_piv;
        std::size_t found = 0;
    };
    auto prepare = [](ModRows a) {
        Level l;
        l.a = std::move(a);
        order_columns(l.a);
        l.piv = leading_pivots(l.a);
        l.is_piv.assign(l.a.rows(), 0);
        for (u32 j = 0; j < l.a.cols; ++j)
            if (l.piv[j] >= 0) {
                l.is_piv[static_cast<std::size_t>(l.piv[j])] = 1;
                ++l.found;
            }
        return l;
    };

    const std::size_t cap = std::min({opts.rank_cap, m.rows(), m.cols()});
    if (cap == 0)
        return 0;
    // the first level stays around: its complement is the cheapest black box
    // to apply, at the price of more iterations
    const Level first = prepare(to_mod_rows(m, p));
    if (first.found >= cap)
        return cap;
    const std::size_t budget = std::min(opts.schur_entries, 64 * first.a.idx.size() + 1'000'000);
    std::size_t rank = first.found;
    std::optional<Level> cur;
    const Level* lvl = &first;
    while (true) {
        auto s = schur_complement(lvl->a, lvl->piv, lvl->is_piv, p, budget);
        if (!s) {
            // iterations track the remaining rank, bounded by the rows left
            const double left = static_cast<double>(lvl->a.rows() - lvl->found);
            const double here = static_cast<double>(lvl->a.idx.size()) * left;
            const double there = static_cast<double>(first.a.idx.size()) * (static_cast<double>(rank - first.found) + left);
            if (lvl == &first || here <= there)
                return rank + black_box_schur_rank(lvl->a, lvl->piv, lvl->is_piv, p, cap - rank);
            return first.found + black_box_schur_rank(first.a, first.piv, first.is_piv, p, cap - first.found);
        }
        if (s->idx.empty())
            return rank;
        cur = prepare(std::move(*s));
        lvl = &*cur;
        if (rank + lvl->found >= cap)
            return cap;
        rank += lvl->found;
    }
}

RankCertificate rank_modular(const SparseMatrix& m, std::span<const std::uint64_t> primes,
                             const EliminationOptions& opts)
{
    if (primes.empty())
        throw InvalidArgument("rank_modular: empty prime list");
    RankCertificate cert;
    cert.method = RankMethod::Modular;
    for (std::uint64_t p : primes) {
        cert.primes.push_back(p);
        cert.prime_ranks.push_back(rank_mod_p(m, p, opts));
    }
    cert.rank = *std::max_element(cert.prime_ranks.begin(), cert.prime_ranks.end());
    const auto hits = std::count(cert.prime_ranks.begin(), cert.prime_ranks.end(), cert.rank);
    cert.agreement = hits >= 2;
    return cert;
}

// ---------------------------------------------------------------------------
// Fraction-free rank over Q

RankCertificate rank_exact(const SparseMatrix& m, const EliminationOptions& opts)
{
    if (m.domain() == CoeffDomain::Modular)
        throw InvalidArgument("rank_exact needs an integer or rational matrix");
    const VectorList vl = shorter_vectors(m);
    const std::size_t n = vl.dim;
    RankCertificate cert;
    cert.method = m.domain() == CoeffDomain::Rational ? RankMethod::ExactRational : RankMethod::FractionFreeInteger;
    const std::size_t cap = std::min({opts.rank_cap, n, vl.count});
    if (cap == 0)
        return cert;
    const auto order = sparse_first_order(vl);
    const auto count = coordinate_counts(vl);

    std::vector<std::int32_t> pivot_of(n, -1);
    std::vector<std::uint32_t> piv_coord;
    std::vector<std::vector<std::uint32_t>> u_idx;
    std::vector<std::vector<Integer>> u_val;
    std::vector<Integer> u_piv;
    std::vector<std::uint8_t> queued;
    std::vector<Integer> x(n);
    std::vector<std::uint8_t> mark(n, 0);
    std::vector<std::uint32_t> touched;
    MinHeap heap;
    std::size_t stored = 0;
    Integer gg, a, b, tmp;

    auto touch = [&](std::uint32_t c) {
        if (!mark[c]) {
            mark[c] = 1;
            touched.push_back(c);
        }
    };
    auto enqueue = [&](std::uint32_t c, std::int32_t after) {
        const std::int32_t t = pivot_of[c];
        if (t > after && !queued[static_cast<std::size_t>(t)]) {
            queued[static_cast<std::size_t>(t)] = 1;
            heap.push(static_cast<std::uint32_t>(t));
        }
    };

    std::size_t rank = 0;
    for (std::uint32_t v : order) {
        touched.clear();
        // Clear denominators: scale the vector by the lcm of its denominators.
        Integer lcm = 1;
        for (std::size_t k = vl.ptr[v]; k < vl.ptr[v + 1]; ++k)
            if (vl.den[k] != 1)
                mpz_lcm_ui(lcm.get_mpz_t(), lcm.get_mpz_t(), static_cast<unsigned long>(vl.den[k]));
        for (std::size_t k = vl.ptr[v]; k < vl.ptr[v + 1]; ++k) {
            const std::uint32_t c = vl.idx[k];
            touch(c);
            x[c] += Integer(static_cast<long>(vl.num[k])) * (lcm / Integer(static_cast<long>(vl.den[k])));
            enqueue(c, -1);
        }
        while (!heap.empty()) {
            const std::uint32_t t = heap.top();
            heap.pop();
            queued[t] = 0;
            const std::uint32_t c = piv_coord[t];
            if (x[c] == 0)
                continue;
            mpz_gcd(gg.get_mpz_t(), u_piv[t].get_mpz_t(), x[c].get_mpz_t());
            mpz_divexact(a.get_mpz_t(), u_piv[t].get_mpz_t(), gg.get_mpz_t());
            mpz_divexact(b.get_mpz_t(), x[c].get_mpz_t(), gg.get_mpz_t());
            if (a != 1)
                for (std::uint32_t d : touched)
                    if (x[d] != 0)
                        x[d] *= a;
            const auto& ui = u_idx[t];
            const auto& uv = u_val[t];
            for (std::size_t k = 0; k < ui.size(); ++k) {
                const std::uint32_t d = ui[k];
                touch(d);
                mpz_submul(x[d].get_mpz_t(), b.get_mpz_t(), uv[k].get_mpz_t());
                enqueue(d, static_cast<std::int32_t>(t));
            }
        }
        std::int64_t best = -1;
        Integer content = 0;
        for (std::uint32_t c : touched)
            if (x[c] != 0) {
                mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x[c].get_mpz_t());
                if (best < 0 || count[c] < count[best] || (count[c] == count[best] && c < best))
                    best = c;
            }
        if (best >= 0) {
            std::vector<std::uint32_t> ni;
            std::vector<Integer> nv;
            std::sort(touched.begin(), touched.end());
            for (std::uint32_t c : touched)
                if (x[c] != 0) {
                    ni.push_back(c);
                    mpz_divexact(tmp.get_mpz_t(), x[c].get_mpz_t(), content.get_mpz_t());
                    nv.push_back(tmp);
                }
            stored += ni.size();
            if (stored > opts.max_entries)
                throw ResourceError("exact elimination exceeded the entry budget of " +
                                    std::to_string(opts.max_entries) + " entries; use modular mode");
            pivot_of[best] = static_cast<std::int32_t>(rank);
            piv_coord.push_back(static_cast<std::uint32_t>(best));
            mpz_divexact(tmp.get_mpz_t(), x[best].get_mpz_t(), content.get_mpz_t());
            u_piv.push_back(tmp);
            u_idx.push_back(std::move(ni));
            u_val.push_back(std::move(nv));
            queued.push_back(0);
            ++rank;
        }
        for (std::uint32_t c : touched) {
            x[c] = 0;
            mark[c] = 0;
        }
        if (rank >= cap)
            break;
    }
    cert.rank = rank;
    return cert;
}

// ---------------------------------------------------------------------------
// Reduced row echelon form over Q (rows of M as vectors over the columns)

namespace {

struct RationalEchelon {
    std::size_t dim = 0;
    std::vector<std::int32_t> pivot_of;
    std::vector<std::uint32_t> piv_coord;
    std::vector<SparseVector> rows;  // pivot entry normalized to 1, sorted
    bool inconsistent = false;
};

/// Echelonizes the given rows. Coordinates >= `pivot_limit` are never chosen
/// as pivots; a row whose surviving entries all lie there marks the system
/// inconsistent.
RationalEchelon echelonize(const std::vector<SparseVector>& input, std::size_t dim, std::size_t pivot_limit,
                           const EliminationOptions& opts)
{
    RationalEchelon e;
    e.dim = dim;
    e.pivot_of.assign(dim, -1);
    std::vector<std::uint32_t> count(dim, 0);
    for (const auto& r : input)
        for (const auto& [c, v] : r)
            ++count[c];
    std::vector<std::uint32_t> order(input.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return input[a].size() < input[b].size(); });

    std::vector<Rational> x(dim);
    std::vector<std::uint8_t> mark(dim, 0), queued;
    std::vector<std::uint32_t> touched;
    MinHeap heap;
    std::size_t stored = 0;
    Rational f;

    auto touch = [&](std::uint32_t c) {
        if (!mark[c]) {
            mark[c] = 1;
            touched.push_back(c);
        }
    };
    auto enqueue = [&](std::uint32_t c, std::int32_t after) {
        const std::int32_t t = e.pivot_of[c];
        if (t > after && !queued[static_cast<std::size_t>(t)]) {
            queued[static_cast<std::size_t>(t)] = 1;
            heap.push(static_cast<std::uint32_t>(t));
        }
    };

    for (std::uint32_t v : order) {
        touched.clear();
        for (const auto& [c, val] : input[v]) {
            touch(c);
            x[c] += val;
            enqueue(c, -1);
        }
        while (!heap.empty()) {
            const std::uint32_t t = heap.top();
            heap.pop();
            queued[t] = 0;
            f = x[e.piv_coord[t]];
            if (f == 0)
                continue;
            for (const auto& [d, u] : e.rows[t]) {
                touch(d);
                x[d] -= f * u;
                enqueue(d, static_cast<std::int32_t>(t));
            }
        }
        std::int64_t best = -1;
        bool any = false;
        for (std::uint32_t c : touched)
            if (x[c] != 0) {
                any = true;
                if (c < pivot_limit &&
                    (best < 0 || count[c] < count[best] || (count[c] == count[best] && c < best)))
                    best = c;
            }
        if (any && best < 0)
            e.inconsistent = true;
        if (best >= 0) {
            const Rational inv = 1 / x[best];
            SparseVector row;
            std::sort(touched.begin(), touched.end());
            for (std::uint32_t c : touched)
                if (x[c] != 0)
                    row.emplace_back(c, x[c] * inv);
            stored += row.size();
            if (stored > opts.max_entries)
                throw ResourceError("rational elimination exceeded the entry budget of " +
                                    std::to_string(opts.max_entries) + " entries");
            e.pivot_of[best] = static_cast<std::int32_t>(e.rows.size());
            e.piv_coord.push_back(static_cast<std::uint32_t>(best));
            e.rows.push_back(std::move(row));
            queued.push_back(0);
        }
        for (std::uint32_t c : touched) {
            x[c] = 0;
            mark[c] = 0;
        }
    }

    // Back substitution: clear later pivot coordinates from earlier rows.
    for (std::size_t t = e.rows.size(); t-- > 0;) {
        bool needs = false;
        for (const auto& [d, u] : e.rows[t])
            if (d != e.piv_coord[t] && e.pivot_of[d] >= 0) {
                needs = true;
                break;
            }
        if (!needs)
            continue;
        touched.clear();
        for (const auto& [d, u] : e.rows[t]) {
            touch(d);
            x[d] = u;
        }
        for (const auto& [d, u] : SparseVector(e.rows[t])) {
            const std::int32_t t2 = e.pivot_of[d];
            if (d == e.piv_coord[t] || t2 < 0)
                continue;
            f = x[d];
            if (f == 0)
                continue;
            for (const auto& [d2, u2] : e.rows[static_cast<std::size_t>(t2)]) {
                touch(d2);
                x[d2] -= f * u2;
            }
        }
        SparseVector row;
        std::sort(touched.begin(), touched.end());
        for (std::uint32_t c : touched) {
            if (x[c] != 0)
                row.emplace_back(c, x[c]);
            x[c] = 0;
            mark[c] = 0;
        }
        e.rows[t] = std::move(row);
    }
    return e;
}

std::vector<SparseVector> rows_of(const SparseMatrix& m)
{
    std::vector<SparseVector> rows(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t k = m.col_begin(c); k < m.col_end(c); ++k)
            rows[m.row_index(k)].emplace_back(static_cast<std::uint32_t>(c), m.value(k));
    return rows;
}

}  // namespace

SparseVector apply(const SparseMatrix& m, const SparseVector& v)
{
    std::map<std::uint32_t, Rational> acc;
    for (const auto& [c, val] : v) {
        if (c >= m.cols())
            throw InvalidArgument("apply: vector index out of range");
        for (std::size_t k = m.col_begin(c); k < m.col_end(c); ++k)
            acc[m.row_index(k)] += m.value(k) * val;
    }
    SparseVector out;
    for (auto& [r, val] : acc)
        if (val != 0)
            out.emplace_back(r, val);
    return out;
}

std::vector<SparseVector> kernel_basis(const SparseMatrix& m, const EliminationOptions& opts)
{
    if (m.domain() == CoeffDomain::Modular)
        throw InvalidArgument("kernel_basis needs an integer or rational matrix");
    const std::size_t n = m.cols();
    RationalEchelon e = echelonize(rows_of(m), n, n, opts);

    std::vector<std::int64_t> free_slot(n, -1);
    std::vector<SparseVector> basis;
    for (std::size_t c = 0; c < n; ++c)
        if (e.pivot_of[c] < 0) {
            free_slot[c] = static_cast<std::int64_t>(basis.size());
            basis.push_back({{static_cast<std::uint32_t>(c), Rational(1)}});
        }
    for (std::size_t t = 0; t < e.rows.size(); ++t)
        for (const auto& [d, u] : e.rows[t])
            if (free_slot[d] >= 0)
                basis[static_cast<std::size_t>(free_slot[d])].emplace_back(e.piv_coord[t], -u);
    for (auto& v : basis) {
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (!cgplus::apply(m, v).empty())
            throw Error("kernel_basis: verification M v = 0 failed");
    }
    return basis;
}

std::optional<SparseVector> solve_exact(const SparseMatrix& m, const SparseVector& b, const EliminationOptions& opts)
{
    if (m.domain() == CoeffDomain::Modular)
        throw InvalidArgument("solve_exact needs an integer or rational matrix");
    const std::size_t n = m.cols();
    auto rows = rows_of(m);
    for (const auto& [r, v] : b) {
        if (r >= m.rows())
            throw InvalidArgument("solve_exact: right-hand side index out of range");
        rows[r].emplace_back(static_cast<std::uint32_t>(n), v);
    }
    RationalEchelon e = echelonize(rows, n + 1, n, opts);
    if (e.inconsistent)
        return std::nullopt;
    SparseVector x;
    for (std::size_t t = 0; t < e.rows.size(); ++t) {
        const auto& row = e.rows[t];
        if (!row.empty() && row.back().first == n)
            x.emplace_back(e.piv_coord[t], row.back().second);
    }
    std::sort(x.begin(), x.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVector check = cgplus::apply(m, x);
    SparseVector bs = b;
    std::sort(bs.begin(), bs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    bs.erase(std::remove_if(bs.begin(), bs.end(), [](const auto& p) { return p.second == 0; }), bs.end());
    if (check != bs)
        throw Error("solve_exact: verification M x = b failed");
    return x;
}

}  // namespace cgplus
