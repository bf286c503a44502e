#include "cgplus/hwv_lab.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cgplus {

namespace {

int mu_slots(int x, int y)
{
    if (slot_index(x) != slot_index(y) || slot_is_a(x) == slot_is_a(y))
        return 0;
    return slot_is_a(x) ? 1 : -1;
}

std::size_t wedge_prefix(const TensorElement& t)
{
    std::size_t len = 0;
    for (std::size_t f = 0; f < t.plain_offset(); ++f)
        len += static_cast<std::size_t>(t.shape()[f].arity);
    return len;
}

std::size_t resolve_plain(const TensorElement& t, int pos)
{
    const int n = static_cast<int>(t.plain_count());
    const int p = pos < 0 ? n + pos : pos - 1;
    if (p < 0 || p >= n)
        throw InvalidArgument("plain factor position " + std::to_string(pos) + " out of range for " +
                              std::to_string(n) + " plain factors");
    return static_cast<std::size_t>(p);
}

int sign_of(const std::vector<int>& perm)
{
    int s = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j])
                s = -s;
    return s;
}

}  // namespace

TensorElement contract(const TensorElement& t, int i, int j)
{
    const std::size_t pi = resolve_plain(t, i), pj = resolve_plain(t, j);
    if (pi == pj)
        throw InvalidArgument("contraction needs two distinct factors");
    TensorShape shape(t.shape().begin(), t.shape().end() - 2);
    TensorElement r(shape);
    const std::size_t pre = wedge_prefix(t);
    for (const auto& [key, c] : t.terms()) {
        const int m = mu_slots(key[pre + pi], key[pre + pj]);
        if (m == 0)
            continue;
        TensorKey k;
        k.reserve(key.size() - 2);
        for (std::size_t p = 0; p < key.size(); ++p)
            if (p != pre + pi && p != pre + pj)
                k.push_back(key[p]);
        r.add(std::move(k), m * c);
    }
    return r;
}

TensorElement alternate(const TensorElement& t, const std::vector<int>& positions)
{
    if (positions.size() < 2)
        throw InvalidArgument("alternation needs at least two factors");
    std::vector<std::size_t> ps;
    for (int p : positions)
        ps.push_back(resolve_plain(t, p));
    {
        auto sorted = ps;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidArgument("alternation positions repeat");
    }
    TensorShape shape(t.shape().begin(), t.shape().begin() + static_cast<std::ptrdiff_t>(t.plain_offset()));
    shape.push_back(Factor::wedge(static_cast<int>(ps.size())));
    for (std::size_t p = 0; p + ps.size() < t.plain_count(); ++p)
        shape.push_back(Factor::plain());
    TensorElement r(shape);
    const std::size_t pre = wedge_prefix(t);
    for (const auto& [key, c] : t.terms()) {
        TensorKey k(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(pre));
        for (std::size_t p : ps)
            k.push_back(key[pre + p]);
        for (std::size_t p = 0; p < t.plain_count(); ++p)
            if (std::find(ps.begin(), ps.end(), p) == ps.end())
                k.push_back(key[pre + p]);
        r.add(std::move(k), c);
    }
    return r;
}

OperatorPipeline OperatorPipeline::detection(int contractions, int alternations)
{
    std::vector<PipelineStep> steps;
    for (int i = 0; i < contractions; ++i)
        steps.push_back(PipelineStep::contr_end());
    for (int i = 0; i < alternations; ++i)
        steps.push_back(PipelineStep::alter_end());
    return OperatorPipeline(std::move(steps));
}

OperatorPipeline OperatorPipeline::then(const OperatorPipeline& next) const
{
    auto s = steps_;
    s.insert(s.end(), next.steps_.begin(), next.steps_.end());
    return OperatorPipeline(std::move(s));
}

TensorElement OperatorPipeline::apply(const TensorElement& t) const
{
    TensorElement cur = t;
    for (const auto& s : steps_) {
        if (s.kind == PipelineStep::Kind::Contract)
            cur = contract(cur, s.positions.at(0), s.positions.at(1));
        else
            cur = alternate(cur, s.positions);
    }
    return cur;
}

std::string OperatorPipeline::str() const
{
    if (steps_.empty())
        return "id";
    std::ostringstream os;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (i)
            os << " . ";
        const auto& s = steps_[i];
        os << (s.kind == PipelineStep::Kind::Contract ? "contr" : "alter") << "^{";
        for (std::size_t j = 0; j < s.positions.size(); ++j) {
            if (j)
                os << ",";
            if (s.positions[j] == -1)
                os << "n";
            else
                os << s.positions[j];
        }
        os << "}";
    }
    return os.str();
}

TensorElement highest_weight_vector(const Partition& lambda)
{
    const Partition cols = lambda.transpose();
    TensorShape shape;
    TensorKey key;
    for (int c : cols.parts())
        if (c >= 2) {
            shape.push_back(Factor::wedge(c));
            for (int i = 1; i <= c; ++i)
                key.push_back(static_cast<std::uint8_t>(slot_a(i)));
        }
    for (int c : cols.parts())
        if (c == 1) {
            shape.push_back(Factor::plain());
            key.push_back(static_cast<std::uint8_t>(slot_a(1)));
        }
    TensorElement r(shape);
    r.add(std::move(key), 1);
    return r;
}

TensorElement iota_chain(const ChainElement& x)
{
    const int n = x.degree();
    TensorShape shape;
    TensorElement out(shape);
    bool shaped = false;
    std::map<std::pair<int, std::uint32_t>, TensorElement> cache;
    auto iota_of = [&](const WedgeFactor& f) -> const TensorElement& {
        auto key = std::make_pair(int(f.weight), f.index);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, iota(factor_poly(f, x.genus()))).first;
        return it->second;
    };
    for (const auto& [w, c] : x.terms()) {
        // runs of equal weight
        std::vector<std::pair<int, int>> runs;
        for (int i = 0; i < n;) {
            int j = i;
            while (j < n && w[static_cast<std::size_t>(j)].weight == w[static_cast<std::size_t>(i)].weight)
                ++j;
            runs.emplace_back(i, j);
            i = j;
        }
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        while (true) {
            TensorElement t = TensorElement::scalar(Rational(sign_of(perm)) * c);
            for (int p : perm)
                t = tensor_product(t, iota_of(w[static_cast<std::size_t>(p)]));
            if (!shaped) {
                out = TensorElement(t.shape());
                shaped = true;
            }
            out += t;
            // next permutation of the last run that can advance, resetting later runs
            std::size_t r = runs.size();
            bool advanced = false;
            while (r-- > 0) {
                auto b = perm.begin() + runs[r].first, e = perm.begin() + runs[r].second;
                if (std::next_permutation(b, e)) {
                    advanced = true;
                    break;
                }
            }
            if (!advanced)
                break;
        }
    }
    return out;
}

Rational detect_highest_weight(const ChainElement& x, const Partition& lambda, const OperatorPipeline& pipeline)
{
    if (x.is_zero())
        return 0;
    const TensorElement t = pipeline.apply(iota_chain(x));
    const TensorElement a = highest_weight_vector(lambda);
    if (t.is_zero())
        return 0;
    if (!(t.shape() == a.shape()))
        throw InvalidArgument("pipeline " + pipeline.str() + " produces shape " + shape_str(t.shape()) +
                              " but a_" + lambda.str() + " has shape " + shape_str(a.shape()));
    return t.coefficient(a.terms().begin()->first);
}

Integer detection_coefficient_closed_form(int k, int l, const Partition& lambda)
{
    const RhoData d(k, l, lambda);
    if (!d.rho_valid())
        throw InvalidArgument("no rho for " + lambda.str() + " in c(" + std::to_string(k) + ") (x) c(" +
                              std::to_string(l) + ")");
    const int rho = d.rho(), l2 = lambda[1];
    Integer r = factorial(static_cast<unsigned>(rho));
    r *= r;
    r *= factorial(static_cast<unsigned>(k + 2 - rho));
    r *= factorial(static_cast<unsigned>(l + 2 - l2 - rho));
    r *= factorial(static_cast<unsigned>(l2));
    if (k == l)
        r *= 2;
    return r;
}

ChainElement detection_test_element(int k, int l, const Partition& lambda, int g)
{
    if (g < 3)
        throw InvalidArgument("the detection element needs g >= 3");
    const RhoData d(k, l, lambda);
    if (!d.rho_valid() || lambda.length() > 2)
        throw InvalidArgument("invalid lambda " + lambda.str());
    const int rho = d.rho(), l2 = lambda[1];
    if (k + 2 - rho < 0 || l + 2 - l2 - rho < 0)
        throw InvalidArgument("lambda " + lambda.str() + " does not fit c(k) ^ c(l)");
    std::array<int, kMaxGenus> ea{}, eb{}, fa{}, fb{};
    ea[0] = k + 2 - rho;
    ea[2] = rho;
    fa[0] = l + 2 - l2 - rho;
    fa[1] = l2;
    fb[2] = rho;
    const auto sz = static_cast<std::size_t>(g);
    const Monomial f = Monomial::from_exponents({ea.data(), sz}, {eb.data(), sz});
    const Monomial h = Monomial::from_exponents({fa.data(), sz}, {fb.data(), sz});
    return wedge_of({SymElement(f), SymElement(h)}, g);
}

// ---------------------------------------------------------------------------
// sp-action

namespace {

/// [q, x_slot] as a list of (slot, coefficient).
std::vector<std::pair<int, Rational>> act_on_slot(const SymElement& q, int slot, const SymplecticContext& ctx)
{
    std::vector<std::pair<int, Rational>> out;
    const SymElement r = poisson_bracket(q, SymElement(Monomial::variable(slot)), ctx);
    for (const auto& [m, c] : r.terms()) {
        const auto seq = m.variable_sequence();
        out.emplace_back(seq.at(0), c);
    }
    return out;
}

}  // namespace

TensorElement sp_act(const SymElement& q, const TensorElement& t, const SymplecticContext& ctx)
{
    if (q.degree() != 2)
        throw InvalidArgument("sp acts through quadratic elements");
    std::map<int, std::vector<std::pair<int, Rational>>> table;
    for (int p = 0; p < ctx.dim(); ++p)
        table[ctx.basis_slot(p)] = act_on_slot(q, ctx.basis_slot(p), ctx);
    TensorElement r(t.shape());
    for (const auto& [key, c] : t.terms())
        for (std::size_t p = 0; p < key.size(); ++p)
            for (const auto& [s, a] : table.at(key[p])) {
                TensorKey k = key;
                k[p] = static_cast<std::uint8_t>(s);
                r.add(std::move(k), a * c);
            }
    return r;
}

ChainElement sp_act(const SymElement& q, const ChainElement& x)
{
    if (q.degree() != 2)
        throw InvalidArgument("sp acts through quadratic elements");
    const int g = x.genus();
    const SymplecticContext ctx(g);
    ChainElement r(g, x.degree());
    std::map<std::pair<int, std::uint32_t>, std::vector<std::pair<std::uint32_t, Rational>>> cache;
    for (const auto& [w, c] : x.terms())
        for (std::size_t i = 0; i < w.size(); ++i) {
            const auto key = std::make_pair(int(w[i].weight), w[i].index);
            auto it = cache.find(key);
            if (it == cache.end()) {
                std::vector<std::pair<std::uint32_t, Rational>> img;
                const SymElement b = poisson_bracket(q, factor_poly(w[i], g), ctx);
                const auto& basis = MonomialBasis::get(g, w[i].weight + 2);
                for (const auto& [m, a] : b.terms())
                    img.emplace_back(static_cast<std::uint32_t>(basis.index_of(m)), a);
                it = cache.emplace(key, std::move(img)).first;
            }
            for (const auto& [idx, a] : it->second) {
                Wedge v = w;
                v[i].index = idx;
                r.add(std::move(v), a * c);
            }
        }
    return r;
}

std::vector<SymElement> positive_root_vectors(int g)
{
    std::vector<SymElement> out;
    for (int i = 1; i <= g; ++i)
        for (int j = i; j <= g; ++j)
            out.emplace_back(Monomial::variable(slot_a(i)) * Monomial::variable(slot_a(j)));
    for (int i = 1; i <= g; ++i)
        for (int j = i + 1; j <= g; ++j)
            out.emplace_back(Monomial::variable(slot_a(i)) * Monomial::variable(slot_b(j)));
    return out;
}

namespace {

/// a_i b_{i+1} (root e_i - e_{i+1}) and a_g^2 (root 2 e_g).
std::vector<std::pair<SymElement, TorusWeight>> simple_root_vectors(int g)
{
    std::vector<std::pair<SymElement, TorusWeight>> out;
    for (int i = 1; i < g; ++i) {
        TorusWeight a(static_cast<std::size_t>(g), 0);
        a[static_cast<std::size_t>(i - 1)] = 1;
        a[static_cast<std::size_t>(i)] = -1;
        out.emplace_back(SymElement(Monomial::variable(slot_a(i)) * Monomial::variable(slot_b(i + 1))), a);
    }
    TorusWeight a(static_cast<std::size_t>(g), 0);
    a.back() = 2;
    out.emplace_back(SymElement(Monomial::variable(slot_a(g)) * Monomial::variable(slot_a(g))), a);
    return out;
}

SparseMatrix raising_matrix(const ChainBasis& src, int g, int n, int w, const TorusWeight& mu)
{
    std::vector<Triplet> entries;
    std::size_t row_offset = 0;
    for (const auto& [q, alpha] : simple_root_vectors(g)) {
        TorusWeight nu = mu;
        for (std::size_t i = 0; i < nu.size(); ++i)
            nu[i] += alpha[i];
        const ChainBasis dst = ChainBasis::build(g, n, w, nu);
        if (dst.size() == 0)
            continue;
        for (std::size_t j = 0; j < src.size(); ++j) {
            ChainElement x(g, n);
            const auto e = src.entry(j);
            x.add(Wedge(e.begin(), e.end()), 1);
            for (const auto& [i, c] : coordinates(sp_act(q, x), dst)) {
                if (c.get_den() != 1 || !c.get_num().fits_slong_p())
                    throw InconsistentData("raising operator has a non-integral entry");
                entries.push_back({static_cast<std::uint32_t>(row_offset + i), static_cast<std::uint32_t>(j),
                                   c.get_num().get_si(), 1});
            }
        }
        row_offset += dst.size();
    }
    return SparseMatrix::from_triplets(row_offset, src.size(), std::move(entries));
}

}  // namespace

std::vector<ChainElement> raising_kernel(int g, int n, int w, const TorusWeight& mu)
{
    if (!is_dominant(mu))
        throw InvalidArgument("raising kernel needs a dominant weight, got " + weight_str(mu));
    const ChainBasis src = ChainBasis::build(g, n, w, mu);
    std::vector<ChainElement> out;
    if (src.size() == 0)
        return out;
    for (const auto& v : kernel_basis(raising_matrix(src, g, n, w, mu)))
        out.push_back(from_coordinates(src, v));
    return out;
}

std::size_t raising_multiplicity(int g, int n, int w, const TorusWeight& mu, const RankPolicy& policy)
{
    if (!is_dominant(mu))
        throw InvalidArgument("raising kernel needs a dominant weight, got " + weight_str(mu));
    const ChainBasis src = ChainBasis::build(g, n, w, mu);
    if (src.size() == 0)
        return 0;
    return src.size() - compute_rank(raising_matrix(src, g, n, w, mu), policy, src.size()).cert.rank;
}

// ---------------------------------------------------------------------------
// Casimir

namespace {

std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a)
{
    const std::size_t n = a.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            throw InconsistentData("trace form is degenerate");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        const Rational s = 1 / a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] *= s;
            inv[c][j] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0)
                continue;
            const Rational f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

}  // namespace

Casimir::Casimir(int g) : g_(g)
{
    const SymplecticContext ctx(g);
    const auto& quad = MonomialBasis::get(g, 2);
    const std::size_t n = quad.size();
    const auto d = static_cast<std::size_t>(ctx.dim());
    std::vector<std::vector<std::vector<Rational>>> ad(n, std::vector<std::vector<Rational>>(d, std::vector<Rational>(d, 0)));
    for (std::size_t i = 0; i < n; ++i) {
        basis_.emplace_back(quad[i]);
        for (std::size_t p = 0; p < d; ++p)
            for (const auto& [s, c] : act_on_slot(basis_.back(), ctx.basis_slot(static_cast<int>(p)), ctx))
                ad[i][static_cast<std::size_t>(ctx.basis_position(s))][p] += c;
    }
    std::vector<std::vector<Rational>> form(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational tr = 0;
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t s = 0; s < d; ++s)
                    tr += ad[i][r][s] * ad[j][s][r];
            form[i][j] = tr;
        }
    const auto inv = invert(form);
    dual_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (inv[i][j] != 0)
                dual_[i].emplace_back(j, inv[i][j]);

    // calibrate on a_1^3, the highest weight vector of c(1) = V_[3]
    ChainElement top(g, 1);
    top.add({WedgeFactor{1, 0}}, 1);
    const ChainElement ct = apply(top);
    const Rational kappa = ct.coefficient({WedgeFactor{1, 0}});
    if (kappa == 0 || !(ct == [&] { ChainElement t = top; t *= kappa; return t; }()))
        throw InconsistentData("Casimir does not act by a scalar on c(1)");
    scale_ = eigenvalue(Partition({3})) / kappa;
}

ChainElement Casimir::apply(const ChainElement& x) const
{
    ChainElement out(x.genus(), x.degree());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (dual_[i].empty())
            continue;
        ChainElement inner(x.genus(), x.degree());
        for (const auto& [j, c] : dual_[i]) {
            ChainElement y = sp_act(basis_[j], x);
            y *= c;
            inner += y;
        }
        out += sp_act(basis_[i], inner);
    }
    out *= scale_;
    return out;
}

Rational Casimir::eigenvalue(const Partition& lambda) const
{
    if (lambda.length() > g_)
        throw InvalidArgument("partition " + lambda.str() + " is too long for g = " + std::to_string(g_));
    long e = 0;
    for (int i = 0; i < g_; ++i)
        e += static_cast<long>(lambda[i]) * (lambda[i] + 2 * (g_ - i));
    return e;
}

ChainElement Casimir::project(const ChainElement& x, const Partition& lambda, const Decomposition& ambient) const
{
    if (ambient.multiplicity(lambda) == 0)
        throw InvalidArgument(lambda.str() + " does not occur in the ambient module " + ambient.str());
    const Rational target = eigenvalue(lambda);
    ChainElement y = x;
    for (const auto& [nu, m] : ambient.terms()) {
        if (nu == lambda)
            continue;
        const Rational e = eigenvalue(nu);
        if (e == target)
            throw InvalidArgument("Casimir cannot separate " + lambda.str() + " from " + nu.str());
        ChainElement cy = apply(y);
        ChainElement ey = y;
        ey *= e;
        cy -= ey;
        cy *= 1 / (target - e);
        y = std::move(cy);
    }
    return y;
}

}  // namespace cgplus
