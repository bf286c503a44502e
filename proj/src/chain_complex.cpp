#include "cgplus/chain_complex.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace cgplus {

namespace {

/// Cached data for c(k): its monomial basis, torus weights, and the
/// indices grouped by torus weight.
struct Piece {
    const MonomialBasis* basis = nullptr;
    int g = 0;
    std::vector<std::int8_t> weights;  // g entries per monomial
    std::map<TorusWeight, std::vector<std::uint32_t>> by_weight;

    std::span<const std::int8_t> weight(std::size_t i) const
    {
        return {weights.data() + i * static_cast<std::size_t>(g), static_cast<std::size_t>(g)};
    }
};

const Piece& piece(int g, int k)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Piece>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{g, k}];
    if (!slot) {
        auto p = std::make_unique<Piece>();
        p->basis = &MonomialBasis::get(g, k + 2);
        p->g = g;
        p->weights.reserve(p->basis->size() * static_cast<std::size_t>(g));
        for (std::size_t i = 0; i < p->basis->size(); ++i) {
            TorusWeight t = (*p->basis)[i].torus_weight(g);
            for (int v : t)
                p->weights.push_back(static_cast<std::int8_t>(v));
            p->by_weight[t].push_back(static_cast<std::uint32_t>(i));
        }
        slot = std::move(p);
    }
    return *slot;
}

std::u32string key_of(std::span<const WedgeFactor> w)
{
    std::u32string s(w.size(), U'\0');
    for (std::size_t i = 0; i < w.size(); ++i)
        s[i] = static_cast<char32_t>((std::uint32_t(w[i].weight) << 24) | w[i].index);
    return s;
}

/// Weight partitions k_1 >= ... >= k_n >= 1 of w, lexicographically descending.
void partitions_into(int w, int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (n == 0) {
        if (w == 0)
            out.push_back(cur);
        return;
    }
    for (int k = std::min(w - (n - 1), max_part); k >= 1; --k) {
        if (k * n < w)
            break;
        cur.push_back(k);
        partitions_into(w - k, n - 1, k, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> weight_partitions(int w, int n)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    if (n >= 1 && w >= n)
        partitions_into(w, n, w, cur, out);
    return out;
}

/// Calls emit(wedge, coefficient) for every term of d(f_1 ^ ... ^ f_n),
/// each wedge already canonical.
template <class Emit>
void boundary_terms(std::span<const WedgeFactor> f, int g, std::vector<std::pair<Monomial, std::int64_t>>& buf,
                    Wedge& scratch, Emit&& emit)
{
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Piece& pi = piece(g, f[i].weight);
            const Piece& pj = piece(g, f[j].weight);
            bracket_monomials((*pi.basis)[f[i].index], (*pj.basis)[f[j].index], g, buf);
            if (buf.empty())
                continue;
            // (-1)^{i+j+1} with 1-based positions equals (-1)^{i+j+1} 0-based.
            const std::int64_t pair_sign = ((i + j + 1) % 2) ? -1 : 1;
            const int kw = f[i].weight + f[j].weight;
            const MonomialBasis& target = MonomialBasis::get(g, kw + 2);
            for (const auto& [m, c] : buf) {
                WedgeFactor nf{static_cast<std::uint16_t>(kw), 0};
                const std::int64_t idx = target.index_of(m);
                if (idx < 0)
                    throw InconsistentData("bracket produced a monomial outside c(" + std::to_string(kw) + ")");
                nf.index = static_cast<std::uint32_t>(idx);
                scratch.clear();
                std::size_t pos = 0;
                bool repeated = false;
                for (std::size_t t = 0; t < n; ++t) {
                    if (t == i || t == j)
                        continue;
                    if (f[t] == nf)
                        repeated = true;
                    if (canonical_before(f[t], nf))
                        ++pos;
                    scratch.push_back(f[t]);
                }
                if (repeated)
                    continue;
                scratch.insert(scratch.begin() + static_cast<std::ptrdiff_t>(pos), nf);
                emit(scratch, (pos % 2 ? -pair_sign : pair_sign) * c);
            }
        }
}

}  // namespace

bool WedgeLess::operator()(const Wedge& x, const Wedge& y) const
{
    if (x.size() != y.size())
        return x.size() < y.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == y[i])
            continue;
        return canonical_before(x[i], y[i]);
    }
    return false;
}

int canonicalize(Wedge& w)
{
    int sign = 1;
    for (std::size_t i = 1; i < w.size(); ++i)
        for (std::size_t j = i; j > 0; --j) {
            if (w[j] == w[j - 1])
                return 0;
            if (!canonical_before(w[j], w[j - 1]))
                break;
            std::swap(w[j], w[j - 1]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] == w[i - 1])
            return 0;
    return sign;
}

std::string wedge_str(const Wedge& w, int genus)
{
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            s += " ^ ";
        s += MonomialBasis::get(genus, w[i].weight + 2)[w[i].index].str();
    }
    return s;
}

std::size_t sym_dim(int genus, int w)
{
    return binomial(static_cast<unsigned>(2 * genus + w + 1), static_cast<unsigned>(w + 2)).get_ui();
}

// ---------------------------------------------------------------------------
// ChainBasis

ChainBasis ChainBasis::build(int genus, int n, int w, std::optional<TorusWeight> block)
{
    SymplecticContext ctx(genus);
    if (n < 1)
        throw InvalidArgument("chain degree must be >= 1");
    if (block && static_cast<int>(block->size()) != genus)
        throw InvalidArgument("block weight has length " + std::to_string(block->size()) + ", expected " +
                              std::to_string(genus));
    ChainBasis b;
    b.g_ = genus;
    b.n_ = n;
    b.w_ = w;
    b.block_ = block;

    std::vector<WedgeFactor> cur(static_cast<std::size_t>(n));
    std::vector<int> acc(static_cast<std::size_t>(genus), 0);
    for (const auto& part : weight_partitions(w, n)) {
        std::vector<const Piece*> ps;
        for (int k : part)
            ps.push_back(&piece(genus, k));
        auto emit = [&] {
            b.lookup_.emplace(key_of(cur), static_cast<std::uint32_t>(b.size()));
            b.flat_.insert(b.flat_.end(), cur.begin(), cur.end());
        };
        // Depth-first over positions; the last position is looked up by
        // weight when a block is requested.
        auto rec = [&](auto&& self, int pos) -> void {
            const Piece& p = *ps[static_cast<std::size_t>(pos)];
            const auto kw = static_cast<std::uint16_t>(part[static_cast<std::size_t>(pos)]);
            std::uint32_t lo = 0;
            if (pos > 0 && part[static_cast<std::size_t>(pos - 1)] == kw)
                lo = cur[static_cast<std::size_t>(pos - 1)].index + 1;
            if (pos == n - 1 && block) {
                TorusWeight need(static_cast<std::size_t>(genus));
                for (int t = 0; t < genus; ++t)
                    need[static_cast<std::size_t>(t)] = (*block)[static_cast<std::size_t>(t)] - acc[static_cast<std::size_t>(t)];
                auto it = p.by_weight.find(need);
                if (it == p.by_weight.end())
                    return;
                for (std::uint32_t idx : it->second)
                    if (idx >= lo) {
                        cur[static_cast<std::size_t>(pos)] = {kw, idx};
                        emit();
                    }
                return;
            }
            for (std::uint32_t idx = lo; idx < p.basis->size(); ++idx) {
                cur[static_cast<std::size_t>(pos)] = {kw, idx};
                if (pos == n - 1) {
                    emit();
                    continue;
                }
                auto wt = p.weight(idx);
                for (int t = 0; t < genus; ++t)
                    acc[static_cast<std::size_t>(t)] += wt[static_cast<std::size_t>(t)];
                self(self, pos + 1);
                for (int t = 0; t < genus; ++t)
                    acc[static_cast<std::size_t>(t)] -= wt[static_cast<std::size_t>(t)];
            }
        };
        rec(rec, 0);
    }
    return b;
}

std::int64_t ChainBasis::index_of(std::span<const WedgeFactor> w) const
{
    if (static_cast<int>(w.size()) != n_)
        return -1;
    auto it = lookup_.find(key_of(w));
    return it == lookup_.end() ? -1 : std::int64_t(it->second);
}

TorusWeight ChainBasis::torus_weight_of(std::size_t i) const
{
    TorusWeight t(static_cast<std::size_t>(g_), 0);
    for (const auto& f : entry(i)) {
        auto wt = piece(g_, f.weight).weight(f.index);
        for (int s = 0; s < g_; ++s)
            t[static_cast<std::size_t>(s)] += wt[static_cast<std::size_t>(s)];
    }
    return t;
}

// ---------------------------------------------------------------------------
// ChainElement

void ChainElement::add(Wedge w, const Rational& c)
{
    if (static_cast<int>(w.size()) != n_)
        throw InvalidArgument("wedge of length " + std::to_string(w.size()) + " added to degree " +
                              std::to_string(n_) + " chain");
    if (c == 0)
        return;
    const int s = canonicalize(w);
    if (s == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(std::move(w), 0);
    if (s > 0)
        it->second += c;
    else
        it->second -= c;
    if (it->second == 0)
        terms_.erase(it);
}

Rational ChainElement::coefficient(Wedge w) const
{
    const int s = canonicalize(w);
    if (s == 0)
        return 0;
    auto it = terms_.find(w);
    if (it == terms_.end())
        return 0;
    return s > 0 ? it->second : Rational(-it->second);
}

ChainElement& ChainElement::operator+=(const ChainElement& o)
{
    if (o.n_ != n_ || o.g_ != g_)
        throw InvalidArgument("adding chains of different degree or genus");
    for (const auto& [w, c] : o.terms_)
        add(w, c);
    return *this;
}

ChainElement& ChainElement::operator-=(const ChainElement& o)
{
    if (o.n_ != n_ || o.g_ != g_)
        throw InvalidArgument("subtracting chains of different degree or genus");
    for (const auto& [w, c] : o.terms_)
        add(w, -c);
    return *this;
}

ChainElement& ChainElement::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, v] : terms_)
        v *= c;
    return *this;
}

bool ChainElement::operator==(const ChainElement& o) const
{
    return g_ == o.g_ && n_ == o.n_ && terms_ == o.terms_;
}

std::map<std::vector<int>, ChainElement, std::greater<>> ChainElement::by_component() const
{
    std::map<std::vector<int>, ChainElement, std::greater<>> out;
    for (const auto& [w, c] : terms_) {
        std::vector<int> part;
        for (const auto& f : w)
            part.push_back(f.weight);
        auto it = out.try_emplace(part, g_, n_).first;
        it->second.terms_.emplace(w, c);
    }
    return out;
}

std::string ChainElement::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first)
            os << (c > 0 ? " + " : " - ");
        else if (c < 0)
            os << "-";
        first = false;
        Rational a = abs(c);
        if (a != 1)
            os << a.get_str() << "*";
        os << wedge_str(w, g_);
    }
    return os.str();
}

ChainElement wedge_of(const std::vector<SymElement>& factors, int genus)
{
    SymplecticContext ctx(genus);
    ChainElement out(genus, static_cast<int>(factors.size()));
    for (const auto& f : factors)
        if (f.degree() < 3)
            throw InvalidArgument("chain factors must have degree >= 3 (weight >= 1)");
    Wedge cur(factors.size());
    auto rec = [&](auto&& self, std::size_t pos, const Rational& c) -> void {
        if (pos == factors.size()) {
            out.add(cur, c);
            return;
        }
        const int d = factors[pos].degree();
        const MonomialBasis& mb = MonomialBasis::get(genus, d);
        for (const auto& [m, v] : factors[pos].terms()) {
            if (!ctx.contains(m))
                throw InvalidArgument("monomial " + m.str() + " outside genus " + std::to_string(genus));
            cur[pos] = {static_cast<std::uint16_t>(d - 2), static_cast<std::uint32_t>(mb.index_of(m))};
            self(self, pos + 1, c * v);
        }
    };
    rec(rec, 0, Rational(1));
    return out;
}

SymElement factor_poly(const WedgeFactor& f, int genus)
{
    return SymElement(MonomialBasis::get(genus, f.weight + 2)[f.index]);
}

ChainElement boundary(const ChainElement& x)
{
    ChainElement out(x.genus(), std::max(0, x.degree() - 1));
    if (x.degree() < 2)
        return out;
    std::vector<std::pair<Monomial, std::int64_t>> buf;
    Wedge scratch;
    for (const auto& [w, c] : x.terms())
        boundary_terms(w, x.genus(), buf, scratch, [&](const Wedge& t, std::int64_t v) {
            out.add(t, c * Rational(static_cast<long>(v)));
        });
    return out;
}

SparseVector coordinates(const ChainElement& x, const ChainBasis& basis)
{
    if (x.degree() != basis.degree() || x.genus() != basis.genus())
        throw InvalidArgument("chain element does not match the basis degree or genus");
    SparseVector v;
    for (const auto& [w, c] : x.terms()) {
        const std::int64_t i = basis.index_of(w);
        if (i < 0)
            throw InvalidArgument("term " + wedge_str(w, x.genus()) + " is not in the basis");
        v.emplace_back(static_cast<std::uint32_t>(i), c);
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
}

ChainElement from_coordinates(const ChainBasis& basis, const SparseVector& v)
{
    ChainElement x(basis.genus(), basis.degree());
    for (const auto& [i, c] : v) {
        auto e = basis.entry(i);
        x.add(Wedge(e.begin(), e.end()), c);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Differential matrices

SparseMatrix ce_differential(const ChainBasis& source, const ChainBasis& target, unsigned jobs)
{
    if (source.genus() != target.genus() || source.weight() != target.weight() ||
        source.degree() != target.degree() + 1 || source.block() != target.block())
        throw InvalidArgument("ce_differential: target must be the (n-1, w) basis of the same block");
    if (source.degree() < 2)
        throw InvalidArgument("ce_differential needs n >= 2");
    const int g = source.genus();
    const std::size_t cols = source.size();
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cols / 256 + 1)));

    std::vector<std::vector<Triplet>> parts(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    auto work = [&](unsigned t) {
        try {
            std::vector<std::pair<Monomial, std::int64_t>> buf;
            Wedge scratch;
            auto& out = parts[t];
            for (std::size_t c = t; c < cols; c += jobs)
                boundary_terms(source.entry(c), g, buf, scratch, [&](const Wedge& w, std::int64_t v) {
                    const std::int64_t r = target.index_of(w);
                    if (r < 0)
                        throw InconsistentData("differential entry leaves the torus block: column " +
                                               std::to_string(c) + " hits " + wedge_str(w, g));
                    out.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), v, 1});
                });
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back(work, t);
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    std::vector<Triplet> all;
    std::size_t total = 0;
    for (auto& p : parts)
        total += p.size();
    all.reserve(total);
    for (auto& p : parts) {
        all.insert(all.end(), p.begin(), p.end());
        std::vector<Triplet>().swap(p);
    }
    return SparseMatrix::from_triplets(target.size(), cols, std::move(all));
}

SparseMatrix ce_differential(int genus, int n, int w, unsigned jobs)
{
    return ce_differential(ChainBasis::build(genus, n, w), ChainBasis::build(genus, n - 1, w), jobs);
}

BlockIndex block_decompose(const ChainBasis& basis)
{
    BlockIndex bi;
    for (std::size_t i = 0; i < basis.size(); ++i)
        bi.blocks[basis.torus_weight_of(i)].push_back(static_cast<std::uint32_t>(i));
    return bi;
}

// ---------------------------------------------------------------------------
// Counting

namespace {

using WeightCount = std::map<TorusWeight, Integer>;

TorusWeight add_weights(const TorusWeight& x, const TorusWeight& y)
{
    TorusWeight r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r[i] = x[i] + y[i];
    return r;
}

/// Torus character of Lambda^m c(k).
const WeightCount& exterior_character(int g, int k, int m)
{
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, WeightCount> cache;
    {
        std::lock_guard lock(mu);
        auto it = cache.find({g, k, m});
        if (it != cache.end())
            return it->second;
    }
    const Piece& p = piece(g, k);
    std::vector<WeightCount> dp(static_cast<std::size_t>(m) + 1);
    dp[0][TorusWeight(static_cast<std::size_t>(g), 0)] = 1;
    for (const auto& [wt, idxs] : p.by_weight)
        for (std::size_t rep = 0; rep < idxs.size(); ++rep)
            for (int j = m; j >= 1; --j)
                for (const auto& [mu_, c] : dp[static_cast<std::size_t>(j - 1)])
                    dp[static_cast<std::size_t>(j)][add_weights(mu_, wt)] += c;
    std::lock_guard lock(mu);
    return cache.emplace(std::make_tuple(g, k, m), std::move(dp[static_cast<std::size_t>(m)])).first->second;
}

}  // namespace

std::map<TorusWeight, Integer> chain_block_dims(int genus, int n, int w)
{
    SymplecticContext ctx(genus);
    WeightCount total;
    for (const auto& part : weight_partitions(w, n)) {
        WeightCount acc;
        acc[TorusWeight(static_cast<std::size_t>(genus), 0)] = 1;
        for (std::size_t i = 0; i < part.size();) {
            std::size_t j = i;
            while (j < part.size() && part[j] == part[i])
                ++j;
            const WeightCount& ch = exterior_character(genus, part[i], static_cast<int>(j - i));
            WeightCount next;
            for (const auto& [a, ca] : acc)
                for (const auto& [b, cb] : ch)
                    next[add_weights(a, b)] += ca * cb;
            acc = std::move(next);
            i = j;
        }
        for (auto& [mu, c] : acc)
            total[mu] += c;
    }
    for (auto it = total.begin(); it != total.end();)
        it = it->second == 0 ? total.erase(it) : std::next(it);
    return total;
}

Integer chain_dim(int genus, int n, int w)
{
    Integer total = 0;
    for (const auto& part : weight_partitions(w, n)) {
        Integer prod = 1;
        for (std::size_t i = 0; i < part.size();) {
            std::size_t j = i;
            while (j < part.size() && part[j] == part[i])
                ++j;
            prod *= binomial(static_cast<unsigned>(sym_dim(genus, part[i])), static_cast<unsigned>(j - i));
            i = j;
        }
        total += prod;
    }
    return total;
}

bool is_dominant(const TorusWeight& mu)
{
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] < 0)
            return false;
        if (i > 0 && mu[i] > mu[i - 1])
            return false;
    }
    return true;
}

TorusWeight dominant_of(const TorusWeight& mu)
{
    TorusWeight d(mu.size());
    std::transform(mu.begin(), mu.end(), d.begin(), [](int v) { return v < 0 ? -v : v; });
    std::sort(d.begin(), d.end(), std::greater<>());
    return d;
}

std::size_t weyl_orbit_size(const TorusWeight& mu)
{
    TorusWeight d = dominant_of(mu);
    std::size_t perms = factorial(static_cast<unsigned>(d.size())).get_ui();
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < d.size();) {
        std::size_t j = i;
        while (j < d.size() && d[j] == d[i])
            ++j;
        perms /= factorial(static_cast<unsigned>(j - i)).get_ui();
        if (d[i] != 0)
            nonzero += j - i;
        i = j;
    }
    return perms << nonzero;
}

std::vector<TorusWeight> weyl_orbit(const TorusWeight& mu)
{
    TorusWeight d = dominant_of(mu);
    std::sort(d.begin(), d.end());
    std::vector<TorusWeight> out;
    do {
        std::vector<std::size_t> nz;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i] != 0)
                nz.push_back(i);
        for (std::size_t mask = 0; mask < (std::size_t(1) << nz.size()); ++mask) {
            TorusWeight t = d;
            for (std::size_t b = 0; b < nz.size(); ++b)
                if (mask >> b & 1)
                    t[nz[b]] = -t[nz[b]];
            out.push_back(t);
        }
    } while (std::next_permutation(d.begin(), d.end()));
    std::sort(out.begin(), out.end());
    return out;
}

std::string weight_str(const TorusWeight& mu)
{
    std::string s;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(mu[i]);
    }
    return s;
}

TorusWeight parse_weight(const std::string& s)
{
    TorusWeight t;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            t.push_back(std::stoi(item, &used));
            if (used != item.size())
                throw InvalidArgument("");
        } catch (const std::exception&) {
            throw InvalidArgument("bad torus weight '" + s + "'");
        }
    }
    return t;
}

}  // namespace cgplus
