#include "cgplus/poly_core.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <sstream>

namespace cgplus {

// ---------------------------------------------------------------------------
// SymplecticContext

SymplecticContext::SymplecticContext(int genus) : g_(genus)
{
    if (genus < 1 || genus > kMaxGenus)
        throw InvalidArgument("genus must be in [1, " + std::to_string(kMaxGenus) + "], got " +
                              std::to_string(genus));
}

int SymplecticContext::basis_position(int slot) const
{
    if (!valid_slot(slot))
        throw InvalidArgument("slot " + std::to_string(slot) + " not live for g=" + std::to_string(g_));
    return slot_is_a(slot) ? slot : g_ + (slot - kMaxGenus);
}

bool SymplecticContext::valid_slot(int slot) const
{
    if (slot < 0 || slot >= kVarSlots)
        return false;
    return slot_index(slot) <= g_;
}

int SymplecticContext::pairing(int x, int y) const
{
    if (slot_index(x) != slot_index(y) || slot_is_a(x) == slot_is_a(y))
        return 0;
    return slot_is_a(x) ? 1 : -1;
}

bool SymplecticContext::contains(const Monomial& m) const
{
    for (int s = 0; s < kVarSlots; ++s)
        if (m.exponent(s) != 0 && !valid_slot(s))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::variable(int slot)
{
    Monomial m;
    m.e_[slot] = 1;
    return m;
}

Monomial Monomial::from_exponents(std::span<const int> a_exps, std::span<const int> b_exps)
{
    if (a_exps.size() > kMaxGenus || b_exps.size() > kMaxGenus)
        throw InvalidArgument("too many exponents for kMaxGenus");
    Monomial m;
    for (std::size_t i = 0; i < a_exps.size(); ++i) {
        if (a_exps[i] < 0 || a_exps[i] > 255)
            throw InvalidArgument("exponent out of range");
        m.e_[slot_a(static_cast<int>(i) + 1)] = static_cast<std::uint8_t>(a_exps[i]);
    }
    for (std::size_t i = 0; i < b_exps.size(); ++i) {
        if (b_exps[i] < 0 || b_exps[i] > 255)
            throw InvalidArgument("exponent out of range");
        m.e_[slot_b(static_cast<int>(i) + 1)] = static_cast<std::uint8_t>(b_exps[i]);
    }
    return m;
}

Monomial Monomial::parse(std::string_view text)
{
    Monomial m;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*'))
            ++i;
    };
    auto read_int = [&]() -> int {
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
            throw InvalidArgument("bad monomial '" + std::string(text) + "'");
        int v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            v = v * 10 + (text[i++] - '0');
        return v;
    };
    skip();
    if (i < text.size() && text[i] == '1') {
        ++i;
        skip();
        if (i != text.size())
            throw InvalidArgument("bad monomial '" + std::string(text) + "'");
        return m;
    }
    while (i < text.size()) {
        char c = text[i++];
        if (c != 'a' && c != 'b')
            throw InvalidArgument("bad monomial '" + std::string(text) + "'");
        int idx = read_int();
        if (idx < 1 || idx > kMaxGenus)
            throw InvalidArgument("variable index out of range in '" + std::string(text) + "'");
        int e = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            e = read_int();
        }
        int s = c == 'a' ? slot_a(idx) : slot_b(idx);
        if (m.e_[s] + e > 255)
            throw InvalidArgument("exponent overflow");
        m.e_[s] = static_cast<std::uint8_t>(m.e_[s] + e);
        skip();
    }
    return m;
}

int Monomial::degree() const
{
    int d = 0;
    for (auto x : e_)
        d += x;
    return d;
}

TorusWeight Monomial::torus_weight(int genus) const
{
    TorusWeight w(genus);
    for (int i = 1; i <= genus; ++i)
        w[i - 1] = int(e_[slot_a(i)]) - int(e_[slot_b(i)]);
    return w;
}

Monomial Monomial::operator*(const Monomial& o) const
{
    Monomial r;
    for (int s = 0; s < kVarSlots; ++s) {
        int v = int(e_[s]) + int(o.e_[s]);
        if (v > 255)
            throw InvalidArgument("exponent overflow in product");
        r.e_[s] = static_cast<std::uint8_t>(v);
    }
    return r;
}

Monomial Monomial::without_var(int slot) const
{
    Monomial r = *this;
    if (r.e_[slot] == 0)
        throw InvalidArgument("without_var: variable absent");
    --r.e_[slot];
    return r;
}

std::vector<std::uint8_t> Monomial::variable_sequence() const
{
    // Basis order a_1..a_g, b_1..b_g coincides with slot order.
    std::vector<std::uint8_t> seq;
    for (int s = 0; s < kVarSlots; ++s)
        for (int k = 0; k < e_[s]; ++k)
            seq.push_back(static_cast<std::uint8_t>(s));
    return seq;
}

std::string Monomial::str() const
{
    std::string out;
    for (int s = 0; s < kVarSlots; ++s) {
        if (e_[s] == 0)
            continue;
        if (!out.empty())
            out += '*';
        out += slot_is_a(s) ? 'a' : 'b';
        out += std::to_string(slot_index(s));
        if (e_[s] > 1)
            out += '^' + std::to_string(e_[s]);
    }
    return out.empty() ? "1" : out;
}

std::size_t Monomial::hash() const
{
    std::uint64_t lo = 0, hi = 0;
    for (int s = 0; s < 8; ++s) {
        lo |= std::uint64_t(e_[s]) << (8 * s);
        hi |= std::uint64_t(e_[s + 8]) << (8 * s);
    }
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ull;
    h ^= (hi + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2));
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
}

TorusWeight torus_weight(const Monomial& m, const SymplecticContext& ctx)
{
    if (!ctx.contains(m))
        throw InvalidArgument("monomial " + m.str() + " outside context g=" + std::to_string(ctx.genus()));
    return m.torus_weight(ctx.genus());
}

// ---------------------------------------------------------------------------
// MonomialBasis

MonomialBasis::MonomialBasis(int genus, int degree) : g_(genus), d_(degree)
{
    SymplecticContext ctx(genus);
    if (degree < 0)
        throw InvalidArgument("negative degree");
    const int nv = ctx.dim();
    std::vector<int> seq(degree, 0);
    // Nondecreasing sequences over basis positions in lexicographic order.
    auto emit = [&] {
        Monomial m;
        for (int p : seq)
            m = m * Monomial::variable(ctx.basis_slot(p));
        index_.emplace(m, static_cast<std::uint32_t>(monos_.size()));
        monos_.push_back(m);
    };
    if (degree == 0) {
        emit();
        return;
    }
    while (true) {
        emit();
        int i = degree - 1;
        while (i >= 0 && seq[i] == nv - 1)
            --i;
        if (i < 0)
            break;
        ++seq[i];
        for (int j = i + 1; j < degree; ++j)
            seq[j] = seq[i];
    }
}

const MonomialBasis& MonomialBasis::get(int genus, int degree)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{genus, degree}];
    if (!slot)
        slot = std::make_unique<MonomialBasis>(genus, degree);
    return *slot;
}

std::int64_t MonomialBasis::index_of(const Monomial& m) const
{
    auto it = index_.find(m);
    return it == index_.end() ? -1 : std::int64_t(it->second);
}

// ---------------------------------------------------------------------------
// SymElement

SymElement::SymElement(const Monomial& m, Rational coeff) : degree_(m.degree())
{
    add_term(m, coeff);
}

SymElement SymElement::from_terms(const std::vector<std::pair<Monomial, Rational>>& terms)
{
    if (terms.empty())
        throw InvalidArgument("from_terms: degree of an empty term list is undefined");
    SymElement r(terms.front().first.degree());
    for (const auto& [m, c] : terms)
        r.add_term(m, c);
    return r;
}

Rational SymElement::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void SymElement::add_term(const Monomial& m, const Rational& c)
{
    if (m.degree() != degree_)
        throw InvalidArgument("non-homogeneous term " + m.str() + " in degree " + std::to_string(degree_) +
                              " element");
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

SymElement& SymElement::operator+=(const SymElement& o)
{
    if (o.is_zero())
        return *this;
    if (o.degree_ != degree_)
        throw InvalidArgument("adding elements of different degree");
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

SymElement& SymElement::operator-=(const SymElement& o)
{
    if (o.is_zero())
        return *this;
    if (o.degree_ != degree_)
        throw InvalidArgument("subtracting elements of different degree");
    for (const auto& [m, c] : o.terms_)
        add_term(m, -c);
    return *this;
}

SymElement& SymElement::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_)
        v *= c;
    return *this;
}

SymElement SymElement::operator-() const
{
    SymElement r = *this;
    r *= -1;
    return r;
}

std::string SymElement::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        first = false;
        Rational a = abs(c);
        if (a != 1 || m.degree() == 0)
            os << a.get_str() << (m.degree() ? "*" : "");
        if (m.degree())
            os << m.str();
    }
    return os.str();
}

void bracket_monomials(const Monomial& f, const Monomial& h, int genus,
                       std::vector<std::pair<Monomial, std::int64_t>>& out)
{
    out.clear();
    for (int i = 1; i <= genus; ++i) {
        const int sa = slot_a(i), sb = slot_b(i);
        const std::int64_t c = std::int64_t(f.exponent(sa)) * h.exponent(sb) -
                               std::int64_t(f.exponent(sb)) * h.exponent(sa);
        if (c == 0)
            continue;
        // f*h / (a_i b_i): both summands reduce to this monomial.
        Monomial m = f * h;
        m = m.without_var(sa).without_var(sb);
        out.emplace_back(m, c);
    }
}

SymElement poisson_bracket(const SymElement& f, const SymElement& h, const SymplecticContext& ctx)
{
    const int out_deg = f.degree() + h.degree() - 2;
    if (out_deg < 0)
        throw InvalidArgument("bracket of constants");
    SymElement r(out_deg);
    std::vector<std::pair<Monomial, std::int64_t>> buf;
    for (const auto& [mf, cf] : f.terms()) {
        if (!ctx.contains(mf))
            throw InvalidArgument("bracket operand " + mf.str() + " outside context");
        for (const auto& [mh, ch] : h.terms()) {
            if (!ctx.contains(mh))
                throw InvalidArgument("bracket operand " + mh.str() + " outside context");
            bracket_monomials(mf, mh, ctx.genus(), buf);
            for (const auto& [m, c] : buf)
                r.add_term(m, cf * ch * Rational(static_cast<long>(c)));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// TensorElement

std::string shape_str(const TensorShape& shape)
{
    if (shape.empty())
        return "Q";
    std::string s;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i)
            s += " (x) ";
        s += shape[i].kind == Factor::Kind::Plain ? std::string("H") : "L" + std::to_string(shape[i].arity) + "H";
    }
    return s;
}

TensorElement::TensorElement(TensorShape shape) : shape_(std::move(shape))
{
    bool seen_plain = false;
    for (const auto& f : shape_) {
        if (f.kind == Factor::Kind::Plain) {
            if (f.arity != 1)
                throw InvalidArgument("Plain factor must have arity 1");
            seen_plain = true;
        } else {
            if (f.arity < 1)
                throw InvalidArgument("Wedge factor arity must be positive");
            if (seen_plain)
                throw InvalidArgument("Wedge factors must precede Plain factors");
        }
        key_len_ += static_cast<std::size_t>(f.arity);
    }
}

TensorElement TensorElement::scalar(const Rational& c)
{
    TensorElement t{TensorShape{}};
    t.add({}, c);
    return t;
}

void TensorElement::add(TensorKey key, const Rational& c)
{
    if (key.size() != key_len_)
        throw InvalidArgument("tensor key length mismatch");
    if (c == 0)
        return;
    int sign = 1;
    std::size_t pos = 0;
    for (const auto& f : shape_) {
        if (f.kind == Factor::Kind::Wedge && f.arity > 1) {
            auto first = key.begin() + static_cast<std::ptrdiff_t>(pos);
            auto last = first + f.arity;
            // insertion sort, counting transpositions
            for (auto i = first + 1; i < last; ++i)
                for (auto j = i; j > first && *(j - 1) >= *j; --j) {
                    if (*(j - 1) == *j)
                        return;
                    std::iter_swap(j - 1, j);
                    sign = -sign;
                }
        }
        pos += static_cast<std::size_t>(f.arity);
    }
    auto [it, inserted] = terms_.try_emplace(std::move(key), sign > 0 ? c : Rational(-c));
    if (!inserted) {
        if (sign > 0)
            it->second += c;
        else
            it->second -= c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Rational TensorElement::coefficient(TensorKey key) const
{
    TensorElement probe(shape_);
    probe.add(std::move(key), 1);
    if (probe.is_zero())
        return 0;
    const auto& [k, s] = *probe.terms_.begin();
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : Rational(it->second * s);
}

TensorElement& TensorElement::operator+=(const TensorElement& o)
{
    if (!(o.shape_ == shape_))
        throw InvalidArgument("adding tensors of shapes " + shape_str(shape_) + " and " + shape_str(o.shape_));
    for (const auto& [k, c] : o.terms_) {
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o)
{
    TensorElement neg = o;
    neg *= -1;
    return *this += neg;
}

TensorElement& TensorElement::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_)
        v *= c;
    return *this;
}

std::size_t TensorElement::plain_offset() const
{
    std::size_t i = 0;
    while (i < shape_.size() && shape_[i].kind == Factor::Kind::Wedge)
        ++i;
    return i;
}

std::string TensorElement::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        os << (first ? "" : " + ") << "(" << c.get_str() << ")";
        first = false;
        std::size_t pos = 0;
        for (const auto& f : shape_) {
            os << (pos == 0 ? " " : "(x)");
            for (int j = 0; j < f.arity; ++j) {
                int s = key[pos + j];
                os << (j ? "^" : "") << (slot_is_a(s) ? 'a' : 'b') << slot_index(s);
            }
            pos += static_cast<std::size_t>(f.arity);
        }
    }
    return os.str();
}

TensorElement tensor_product(const TensorElement& a, const TensorElement& b)
{
    TensorShape shape = a.shape();
    shape.insert(shape.end(), b.shape().begin(), b.shape().end());
    TensorElement r(shape);  // validates wedge-before-plain
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            TensorKey k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            r.add(std::move(k), ca * cb);
        }
    return r;
}

TensorElement iota(const SymElement& f)
{
    const int n = f.degree();
    TensorElement r(TensorShape(static_cast<std::size_t>(n), Factor::plain()));
    for (const auto& [m, c] : f.terms()) {
        Integer mult = 1;
        for (int s = 0; s < kVarSlots; ++s)
            mult *= factorial(static_cast<unsigned>(m.exponent(s)));
        const Rational coeff = c * Rational(mult);
        auto seq = m.variable_sequence();
        do {
            r.add(TensorKey(seq.begin(), seq.end()), coeff);
        } while (std::next_permutation(seq.begin(), seq.end()));
    }
    return r;
}

}  // namespace cgplus
