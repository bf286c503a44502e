#include "cgplus/rep_theory.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace cgplus {

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<int> parts)
{
    while (!parts.empty() && parts.back() == 0)
        parts.pop_back();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 0)
            throw InvalidArgument("negative part in partition");
        if (i > 0 && parts[i] > parts[i - 1])
            throw InvalidArgument("partition parts must be weakly decreasing");
    }
    parts_ = std::move(parts);
}

Partition Partition::parse(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (c != '[' && c != ']' && c != ' ')
            s += c;
    if (s.empty())
        throw InvalidArgument("empty partition string");
    std::vector<int> parts;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit))
                throw InvalidArgument("bad partition '" + text + "'");
            parts.push_back(std::stoi(item));
        }
    } else {
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw InvalidArgument("bad partition '" + text + "'");
            parts.push_back(c - '0');
        }
    }
    return Partition(std::move(parts));
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

Partition Partition::transpose() const
{
    std::vector<int> t;
    for (int c = 0; c < (parts_.empty() ? 0 : parts_[0]); ++c) {
        int len = 0;
        while (len < length() && parts_[static_cast<std::size_t>(len)] > c)
            ++len;
        t.push_back(len);
    }
    return Partition(std::move(t));
}

bool Partition::contains(const Partition& mu) const
{
    if (mu.length() > length())
        return false;
    for (int i = 0; i < mu.length(); ++i)
        if (mu[i] > (*this)[i])
            return false;
    return true;
}

TorusWeight Partition::as_weight(int g) const
{
    if (length() > g)
        throw InvalidArgument("partition " + str() + " has more than " + std::to_string(g) + " rows");
    TorusWeight t(static_cast<std::size_t>(g), 0);
    for (int i = 0; i < length(); ++i)
        t[static_cast<std::size_t>(i)] = parts_[static_cast<std::size_t>(i)];
    return t;
}

std::string Partition::str() const
{
    if (parts_.empty())
        return "[0]";
    const bool wide = std::any_of(parts_.begin(), parts_.end(), [](int p) { return p >= 10; });
    std::string s = "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (wide && i)
            s += ",";
        s += std::to_string(parts_[i]);
    }
    return s + "]";
}

namespace {

void partitions_rec(int n, int max_len, int max_part, std::vector<int>& cur, std::vector<Partition>& out)
{
    if (n == 0) {
        out.emplace_back(cur);
        return;
    }
    if (static_cast<int>(cur.size()) == max_len)
        return;
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_rec(n - p, max_len, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions_of(int n, int max_len, int max_part)
{
    std::vector<Partition> out;
    std::vector<int> cur;
    if (n >= 0)
        partitions_rec(n, max_len, max_part, cur, out);
    return out;
}

// ---------------------------------------------------------------------------
// Decomposition

void Decomposition::add(const Partition& p, long multiplicity)
{
    if (multiplicity == 0)
        return;
    auto& m = terms_[p];
    m += multiplicity;
    if (m == 0)
        terms_.erase(p);
}

long Decomposition::multiplicity(const Partition& p) const
{
    auto it = terms_.find(p);
    return it == terms_.end() ? 0 : it->second;
}

long Decomposition::count() const
{
    long c = 0;
    for (const auto& [p, m] : terms_)
        c += m;
    return c;
}

bool Decomposition::multiplicity_free() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second == 1; });
}

Integer Decomposition::total_dim(int g) const
{
    Integer d = 0;
    for (const auto& [p, m] : terms_)
        d += sp_dim(p, g) * m;
    return d;
}

Decomposition Decomposition::parse(const std::string& s)
{
    Decomposition d;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '+')) {
        item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
        if (item.empty())
            continue;
        const auto br = item.find('[');
        if (br == std::string::npos)
            throw InvalidArgument("bad decomposition term '" + item + "'");
        const long mult = br == 0 ? 1 : std::stol(item.substr(0, br));
        d.add(Partition::parse(item.substr(br)), mult);
    }
    return d;
}

std::string Decomposition::str() const
{
    if (terms_.empty())
        return "0";
    std::string s;
    for (const auto& [p, m] : terms_) {
        if (!s.empty())
            s += " + ";
        if (m != 1)
            s += std::to_string(m);
        s += p.str();
    }
    return s;
}

nlohmann::json Decomposition::to_json(int g) const
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, m] : terms_) {
        const Integer d = sp_dim(p, g);
        nlohmann::json e;
        e["partition"] = p.parts().empty() ? std::vector<int>{0} : p.parts();
        e["multiplicity"] = m;
        if (d.fits_ulong_p())
            e["dim"] = d.get_ui();
        else
            e["dim"] = d.get_str();
        arr.push_back(std::move(e));
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Characters

Integer sp_dim(const Partition& lambda, int g)
{
    if (g < 1)
        throw InvalidArgument("genus must be positive");
    if (lambda.length() > g)
        throw InvalidArgument("partition " + lambda.str() + " has more than " + std::to_string(g) + " rows");
    std::vector<long> l(static_cast<std::size_t>(g)), r(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
        r[static_cast<std::size_t>(i)] = g - i;
        l[static_cast<std::size_t>(i)] = lambda[i] + g - i;
    }
    Integer num = 1, den = 1;
    for (int i = 0; i < g; ++i) {
        num *= l[static_cast<std::size_t>(i)];
        den *= r[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < g; ++j) {
            num *= (l[static_cast<std::size_t>(i)] - l[static_cast<std::size_t>(j)]) *
                   (l[static_cast<std::size_t>(i)] + l[static_cast<std::size_t>(j)]);
            den *= (r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]) *
                   (r[static_cast<std::size_t>(i)] + r[static_cast<std::size_t>(j)]);
        }
    }
    return num / den;
}

bool dominates(const TorusWeight& lambda, const TorusWeight& mu)
{
    long partial = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        partial += lambda[i] - mu[i];
        if (partial < 0)
            return false;
    }
    return partial % 2 == 0;
}

namespace {

TorusWeight dominant_rep(const TorusWeight& mu)
{
    TorusWeight d(mu.size());
    std::transform(mu.begin(), mu.end(), d.begin(), [](int v) { return v < 0 ? -v : v; });
    std::sort(d.begin(), d.end(), std::greater<>());
    return d;
}

std::vector<TorusWeight> positive_roots(int g)
{
    std::vector<TorusWeight> roots;
    const auto G = static_cast<std::size_t>(g);
    for (std::size_t i = 0; i < G; ++i) {
        TorusWeight r(G, 0);
        r[i] = 2;
        roots.push_back(r);
        for (std::size_t j = i + 1; j < G; ++j) {
            TorusWeight a(G, 0), b(G, 0);
            a[i] = 1;
            a[j] = -1;
            b[i] = 1;
            b[j] = 1;
            roots.push_back(a);
            roots.push_back(b);
        }
    }
    return roots;
}

bool is_dominant_weight(const TorusWeight& mu)
{
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] < 0 || (i > 0 && mu[i] > mu[i - 1]))
            return false;
    return true;
}

std::string weight_text(const TorusWeight& mu)
{
    std::string s = "(";
    for (std::size_t i = 0; i < mu.size(); ++i)
        s += (i ? "," : "") + std::to_string(mu[i]);
    return s + ")";
}

long dot(const TorusWeight& x, const TorusWeight& y)
{
    long s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += long(x[i]) * y[i];
    return s;
}

std::vector<TorusWeight> orbit_of(const TorusWeight& mu)
{
    TorusWeight d = dominant_rep(mu);
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
    return out;
}

}  // namespace

std::map<TorusWeight, Integer> sp_dominant_multiplicities(const Partition& lambda, int g)
{
    const TorusWeight top = lambda.as_weight(g);
    // Dominant weights below lambda, lexicographically descending.
    std::vector<TorusWeight> dom;
    for (int s = lambda.size(); s >= 0; s -= 2)
        for (const auto& p : partitions_of(s, g, lambda[0])) {
            TorusWeight t = p.as_weight(g);
            if (dominates(top, t))
                dom.push_back(t);
        }
    std::sort(dom.begin(), dom.end(), std::greater<>());

    TorusWeight rho(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i)
        rho[static_cast<std::size_t>(i)] = g - i;
    auto shifted_norm = [&](const TorusWeight& mu) {
        TorusWeight t(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i)
            t[i] = mu[i] + rho[i];
        return dot(t, t);
    };
    const long top_norm = shifted_norm(top);
    const auto roots = positive_roots(g);

    std::map<TorusWeight, Integer> mult;
    for (const auto& mu : dom) {
        if (mu == top) {
            mult[mu] = 1;
            continue;
        }
        Integer sum = 0;
        for (const auto& a : roots) {
            TorusWeight nu = mu;
            while (true) {
                for (std::size_t i = 0; i < nu.size(); ++i)
                    nu[i] += a[i];
                const TorusWeight d = dominant_rep(nu);
                if (!dominates(top, d))
                    break;
                auto it = mult.find(d);
                if (it != mult.end())
                    sum += it->second * dot(nu, a);
            }
        }
        const long denom = top_norm - shifted_norm(mu);
        const Integer m = 2 * sum / denom;
        if (m * denom != 2 * sum)
            throw InconsistentData("Freudenthal recursion produced a non-integer multiplicity");
        if (m != 0)
            mult[mu] = m;
    }
    return mult;
}

std::map<TorusWeight, Integer> sp_weight_multiplicities(const Partition& lambda, int g)
{
    std::map<TorusWeight, Integer> full;
    for (const auto& [mu, m] : sp_dominant_multiplicities(lambda, g))
        for (const auto& t : orbit_of(mu))
            full[t] = m;
    return full;
}

std::map<TorusWeight, Integer> sp_weight_multiplicities_tableaux(const Partition& lambda, int g)
{
    if (lambda.length() > g)
        throw InvalidArgument("partition " + lambda.str() + " has more than " + std::to_string(g) + " rows");
    // Symbols 1 < 1' < 2 < 2' < ... encoded as 1, 2, ..., 2g; symbol 2i-1
    // is i and 2i is i-bar. Row r holds only symbols >= r.
    struct Cell {
        int r, c;
    };
    std::vector<Cell> cells;
    for (int r = 0; r < lambda.length(); ++r)
        for (int c = 0; c < lambda[r]; ++c)
            cells.push_back({r, c});
    std::vector<std::vector<int>> t(static_cast<std::size_t>(lambda.length()));
    for (int r = 0; r < lambda.length(); ++r)
        t[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(lambda[r]), 0);
    TorusWeight wt(static_cast<std::size_t>(g), 0);
    std::map<TorusWeight, Integer> out;
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == cells.size()) {
            out[wt] += 1;
            return;
        }
        const auto [r, c] = cells[k];
        int lo = 2 * r + 1;
        if (c > 0)
            lo = std::max(lo, t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c - 1)]);
        if (r > 0)
            lo = std::max(lo, t[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c)] + 1);
        for (int v = lo; v <= 2 * g; ++v) {
            t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
            const auto i = static_cast<std::size_t>((v - 1) / 2);
            const int d = (v % 2) ? 1 : -1;
            wt[i] += d;
            self(self, k + 1);
            wt[i] -= d;
        }
    };
    rec(rec, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force characters

WeightDiagram sym_power_diagram(int n, int g)
{
    WeightDiagram d;
    for (const auto& m : MonomialBasis::get(g, n).monomials())
        d[m.torus_weight(g)] += 1;
    return d;
}

WeightDiagram tensor_diagram(const WeightDiagram& x, const WeightDiagram& y)
{
    WeightDiagram out;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y) {
            TorusWeight t(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                t[i] = a[i] + b[i];
            out[t] += ca * cb;
        }
    return out;
}

WeightDiagram exterior_power_diagram(const WeightDiagram& x, int m)
{
    if (x.empty())
        return {};
    const std::size_t g = x.begin()->first.size();
    std::vector<WeightDiagram> dp(static_cast<std::size_t>(m) + 1);
    dp[0][TorusWeight(g, 0)] = 1;
    for (const auto& [wt, c] : x)
        for (unsigned long rep = 0; rep < c.get_ui(); ++rep)
            for (int j = m; j >= 1; --j)
                for (const auto& [mu, v] : dp[static_cast<std::size_t>(j - 1)]) {
                    TorusWeight t(g);
                    for (std::size_t i = 0; i < g; ++i)
                        t[i] = mu[i] + wt[i];
                    dp[static_cast<std::size_t>(j)][t] += v;
                }
    return dp[static_cast<std::size_t>(m)];
}

Decomposition decompose_from_weight_dims(const std::map<TorusWeight, Integer>& dims, int g)
{
    std::map<TorusWeight, Integer, std::greater<>> residual;
    for (const auto& [mu, d] : dims) {
        if (static_cast<int>(mu.size()) != g)
            throw InvalidArgument("weight " + std::to_string(mu.size()) + "-tuple given for genus " + std::to_string(g));
        if (d < 0)
            throw InconsistentData("inconsistent weight data: negative dimension");
        if (is_dominant_weight(mu))
            residual[mu] = d;
    }
    for (const auto& [mu, d] : dims) {
        if (is_dominant_weight(mu))
            continue;
        auto it = residual.find(dominant_rep(mu));
        const Integer rep = it == residual.end() ? Integer(0) : it->second;
        if (rep != d)
            throw InconsistentData("inconsistent weight data: weight " + weight_text(mu) +
                                   " differs from its dominant representative");
    }
    Decomposition out;
    while (true) {
        auto it = std::find_if(residual.begin(), residual.end(), [](const auto& e) { return e.second != 0; });
        if (it == residual.end())
            break;
        if (it->second < 0)
            throw InconsistentData("inconsistent weight data: negative residual");
        const Integer mult = it->second;
        const Partition lam(std::vector<int>(it->first.begin(), it->first.end()));
        for (const auto& [mu, m] : sp_dominant_multiplicities(lam, g)) {
            Integer& r = residual[mu];
            r -= mult * m;
            if (r < 0)
                throw InconsistentData("inconsistent weight data: negative residual while peeling " + lam.str());
        }
        out.add(lam, mult.get_si());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Littlewood-Richardson

Integer lr_coefficient(const Partition& lambda, const Partition& mu, const Partition& nu)
{
    if (lambda.size() != mu.size() + nu.size() || !lambda.contains(mu) || !lambda.contains(nu))
        return 0;
    struct Cell {
        int r, c;
    };
    // Reading order: rows top to bottom, each row right to left.
    std::vector<Cell> cells;
    for (int r = 0; r < lambda.length(); ++r)
        for (int c = lambda[r] - 1; c >= mu[r]; --c)
            cells.push_back({r, c});
    std::vector<std::vector<int>> t(static_cast<std::size_t>(lambda.length()));
    for (int r = 0; r < lambda.length(); ++r)
        t[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(lambda[r]), 0);
    std::vector<int> used(static_cast<std::size_t>(nu.length()) + 2, 0);
    Integer count = 0;
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == cells.size()) {
            count += 1;
            return;
        }
        const auto [r, c] = cells[k];
        int hi = nu.length();
        if (c + 1 < lambda[r])
            hi = std::min(hi, t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c + 1)]);
        int lo = 1;
        if (r > 0 && c >= mu[r - 1])
            lo = t[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c)] + 1;
        for (int v = lo; v <= hi; ++v) {
            if (used[static_cast<std::size_t>(v)] >= nu[v - 1])
                continue;
            if (v > 1 && used[static_cast<std::size_t>(v)] + 1 > used[static_cast<std::size_t>(v - 1)])
                continue;
            t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
            ++used[static_cast<std::size_t>(v)];
            self(self, k + 1);
            --used[static_cast<std::size_t>(v)];
        }
    };
    rec(rec, 0);
    return count;
}

std::map<Partition, Integer> lr_product(const Partition& mu, const Partition& nu)
{
    std::map<Partition, Integer> out;
    for (const auto& lam : partitions_of(mu.size() + nu.size(), mu.length() + nu.length(), mu[0] + nu[0])) {
        const Integer c = lr_coefficient(lam, mu, nu);
        if (c != 0)
            out[lam] = c;
    }
    return out;
}

Decomposition branch_gl_to_sp(const Partition& lambda, int g)
{
    if (lambda.length() > g)
        throw InvalidArgument("Littlewood restriction needs length(lambda) <= g");
    Decomposition out;
    for (int ds = 0; ds <= lambda.size(); ds += 2)
        for (const auto& delta : partitions_of(ds, lambda.length(), lambda[0])) {
            bool even_cols = delta.length() % 2 == 0;
            for (int i = 0; even_cols && i + 1 < delta.length(); i += 2)
                even_cols = delta[i] == delta[i + 1];
            if (!even_cols || !lambda.contains(delta))
                continue;
            for (const auto& mu : partitions_of(lambda.size() - ds, lambda.length(), lambda[0])) {
                const Integer c = lr_coefficient(lambda, delta, mu);
                if (c != 0)
                    out.add(mu, c.get_si());
            }
        }
    return out;
}

std::map<Partition, Integer> plethysm_e2_h(int n)
{
    using Exp = std::array<int, 3>;
    std::vector<Exp> monos;
    for (int a = n; a >= 0; --a)
        for (int b = n - a; b >= 0; --b)
            monos.push_back({a, b, n - a - b});
    // e_2 evaluated at the monomials of h_n.
    std::map<Exp, Integer> poly;
    for (std::size_t i = 0; i < monos.size(); ++i)
        for (std::size_t j = i + 1; j < monos.size(); ++j)
            poly[{monos[i][0] + monos[j][0], monos[i][1] + monos[j][1], monos[i][2] + monos[j][2]}] += 1;
    // Multiply by the Vandermonde determinant x^(2,1,0) antisymmetrized.
    std::map<Exp, Integer> alt;
    Exp delta{2, 1, 0};
    std::array<int, 3> perm{0, 1, 2};
    do {
        int inversions = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)])
                    ++inversions;
        for (const auto& [e, c] : poly) {
            Exp s;
            for (std::size_t i = 0; i < 3; ++i)
                s[i] = e[i] + delta[static_cast<std::size_t>(perm[i])];
            if (inversions % 2)
                alt[s] -= c;
            else
                alt[s] += c;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::map<Partition, Integer> out;
    for (const auto& [e, c] : alt)
        if (c != 0 && e[0] > e[1] && e[1] > e[2])
            out[Partition({e[0] - 2, e[1] - 1, e[2]})] = c;
    return out;
}

std::map<Partition, Integer> plethysm_e2_h_formula(int n)
{
    std::map<Partition, Integer> out;
    for (int j = 1; j <= n; j += 2)
        out[Partition({2 * n - j, j})] = 1;
    return out;
}

// ---------------------------------------------------------------------------
// Families

RhoData::RhoData(int k_, int l_, Partition lam) : k(k_), l(l_), lambda(std::move(lam))
{
    twice_rho = k + l + 4 - lambda[0] - lambda[1];
}

bool RhoData::tensor_condition() const
{
    return rho_valid() && lambda.length() <= 2 && l + 2 >= rho() + lambda[1] && k + 2 <= rho() + lambda[0];
}

bool RhoData::wedge_condition() const
{
    return rho_valid() && k == l && lambda.length() <= 2 && (rho() + lambda[1]) % 2 == 1 &&
           rho() + lambda[1] <= k + 2 && k + 2 <= rho() + lambda[0];
}

namespace {

void check_dimension(const Decomposition& d, int g, const Integer& expected, const std::string& what)
{
    const Integer got = d.total_dim(g);
    if (got != expected)
        throw InconsistentData(what + ": components have total dimension " + got.get_str() + ", expected " +
                               expected.get_str());
}

void require_genus_two(int g)
{
    if (g < 2)
        throw InvalidArgument("two-row decompositions need g >= 2");
}

}  // namespace

Decomposition decompose_tensor_cg(int k, int l, int g)
{
    if (!(k > l && l >= 1))
        throw InvalidArgument("decompose_tensor_cg needs k > l >= 1");
    require_genus_two(g);
    Decomposition d;
    for (int l2 = 0; l2 <= l + 2; ++l2)
        for (int rho = 0; rho <= l + 2 - l2; ++rho)
            d.add(Partition({k + l + 4 - l2 - 2 * rho, l2}));
    const Integer dk = binomial(static_cast<unsigned>(2 * g + k + 1), static_cast<unsigned>(k + 2));
    const Integer dl = binomial(static_cast<unsigned>(2 * g + l + 1), static_cast<unsigned>(l + 2));
    check_dimension(d, g, dk * dl, "c(" + std::to_string(k) + ") (x) c(" + std::to_string(l) + ")");
    return d;
}

Decomposition decompose_tensor_cg_lr(int k, int l, int g)
{
    if (!(k > l && l >= 1))
        throw InvalidArgument("decompose_tensor_cg_lr needs k > l >= 1");
    require_genus_two(g);
    Decomposition d;
    for (const auto& [lam, c] : lr_product(Partition({k + 2}), Partition({l + 2}))) {
        const Decomposition b = branch_gl_to_sp(lam, g);
        for (const auto& [mu, m] : b.terms())
            d.add(mu, m * c.get_si());
    }
    return d;
}

Decomposition decompose_wedge_cg(int k, int g)
{
    if (k < 1)
        throw InvalidArgument("decompose_wedge_cg needs k >= 1");
    require_genus_two(g);
    Decomposition d;
    for (int l2 = 0; l2 <= k + 2; ++l2)
        for (int rho = 0; rho <= k + 2 - l2; ++rho)
            if ((rho + l2) % 2 == 1)
                d.add(Partition({2 * k + 4 - l2 - 2 * rho, l2}));
    const Integer dk = binomial(static_cast<unsigned>(2 * g + k + 1), static_cast<unsigned>(k + 2));
    check_dimension(d, g, dk * (dk - 1) / 2, "Lambda^2 c(" + std::to_string(k) + ")");
    return d;
}

Decomposition decompose_wedge_cg_plethysm(int k, int g)
{
    if (k < 1)
        throw InvalidArgument("decompose_wedge_cg_plethysm needs k >= 1");
    require_genus_two(g);
    Decomposition d;
    for (const auto& [lam, c] : plethysm_e2_h(k + 2)) {
        if (lam.length() > g)
            throw InconsistentData("plethysm term " + lam.str() + " does not fit genus " + std::to_string(g));
        const Decomposition b = branch_gl_to_sp(lam, g);
        for (const auto& [mu, m] : b.terms())
            d.add(mu, m * c.get_si());
    }
    return d;
}

Decomposition decompose_lambda3_c1(int g)
{
    if (g < 3)
        throw InvalidArgument("decompose_lambda3_c1 needs g >= 3");
    const WeightDiagram d3 = exterior_power_diagram(sym_power_diagram(3, g), 3);
    Decomposition d = decompose_from_weight_dims(d3, g);
    const Integer n = binomial(static_cast<unsigned>(2 * g + 2), 3);
    check_dimension(d, g, binomial(static_cast<unsigned>(n.get_ui()), 3), "Lambda^3 c(1)");
    return d;
}

}  // namespace cgplus
