#include "cgplus/cycle_catalog.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <tuple>
#include <algorithm>
#include <atomic>
#include <thread>
#include <sstream>

#ifndef CGPLUS_SOURCE_DIR
#define CGPLUS_SOURCE_DIR "."
#endif

namespace cgplus {

// ---------------------------------------------------------------------------
// Expressions (Pratt parser)

struct Expr::Node {
    enum class Kind { Number, Name, Unary, Binary, Call } kind;
    Rational value;
    std::string op;  // operator or function / variable name
    std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Token {
    enum class Kind { Number, Name, Op, End } kind;
    std::string text;
};

std::vector<Token> tokenize(const std::string& s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            out.push_back({Token::Kind::Number, s.substr(i, j - i)});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Token::Kind::Name, s.substr(i, j - i)});
            i = j;
        } else {
            static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
            bool matched = false;
            for (const char* t : two)
                if (s.compare(i, 2, t) == 0) {
                    out.push_back({Token::Kind::Op, t});
                    i += 2;
                    matched = true;
                    break;
                }
            if (matched)
                continue;
            if (std::string("+-*/^()<>,!").find(c) == std::string::npos)
                throw InvalidArgument("unexpected character '" + std::string(1, c) + "' in expression '" + s + "'");
            out.push_back({Token::Kind::Op, std::string(1, c)});
            ++i;
        }
    }
    out.push_back({Token::Kind::End, ""});
    return out;
}

int infix_power(const std::string& op)
{
    if (op == "||")
        return 1;
    if (op == "&&")
        return 2;
    if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=")
        return 3;
    if (op == "+" || op == "-")
        return 4;
    if (op == "*" || op == "/")
        return 5;
    if (op == "^")
        return 7;
    return 0;
}

class Parser {
public:
    Parser(const std::string& text) : text_(text), toks_(tokenize(text)) {}

    NodePtr parse_all()
    {
        NodePtr n = parse(0);
        if (peek().kind != Token::Kind::End)
            fail("trailing input '" + peek().text + "'");
        return n;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& why) const
    {
        throw InvalidArgument("cannot parse expression '" + text_ + "': " + why);
    }
    void expect(const std::string& op)
    {
        if (peek().kind != Token::Kind::Op || peek().text != op)
            fail("expected '" + op + "'");
        ++pos_;
    }

    NodePtr parse(int min_power)
    {
        NodePtr lhs = prefix();
        while (true) {
            const Token& t = peek();
            if (t.kind != Token::Kind::Op)
                break;
            const int p = infix_power(t.text);
            if (p == 0 || p <= min_power)
                break;
            const std::string op = next().text;
            // '^' is right associative
            NodePtr rhs = parse(op == "^" ? p - 1 : p);
            lhs = std::make_shared<Expr::Node>(Expr::Node{Expr::Node::Kind::Binary, 0, op, {lhs, rhs}});
        }
        return lhs;
    }

    NodePtr prefix()
    {
        Token t = next();
        switch (t.kind) {
        case Token::Kind::Number:
            return std::make_shared<Expr::Node>(Expr::Node{Expr::Node::Kind::Number, Rational(t.text), "", {}});
        case Token::Kind::Name:
            if (peek().kind == Token::Kind::Op && peek().text == "(") {
                ++pos_;
                std::vector<NodePtr> args;
                if (!(peek().kind == Token::Kind::Op && peek().text == ")")) {
                    args.push_back(parse(0));
                    while (peek().kind == Token::Kind::Op && peek().text == ",") {
                        ++pos_;
                        args.push_back(parse(0));
                    }
                }
                expect(")");
                return std::make_shared<Expr::Node>(Expr::Node{Expr::Node::Kind::Call, 0, t.text, std::move(args)});
            }
            return std::make_shared<Expr::Node>(Expr::Node{Expr::Node::Kind::Name, 0, t.text, {}});
        case Token::Kind::Op:
            if (t.text == "(") {
                NodePtr n = parse(0);
                expect(")");
                return n;
            }
            if (t.text == "-" || t.text == "+" || t.text == "!")
                return std::make_shared<Expr::Node>(Expr::Node{Expr::Node::Kind::Unary, 0, t.text, {parse(6)}});
            fail("unexpected '" + t.text + "'");
        case Token::Kind::End:
            break;
        }
        fail("unexpected end of input");
    }

    std::string text_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

long as_long(const Rational& q, const std::string& what)
{
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw InvalidArgument(what + " must be an integer, got " + q.get_str());
    return q.get_num().get_si();
}

Rational eval_node(const Expr::Node& n, const Env& env)
{
    using K = Expr::Node::Kind;
    switch (n.kind) {
    case K::Number:
        return n.value;
    case K::Name: {
        auto it = env.find(n.op);
        if (it == env.end())
            throw InvalidArgument("unknown variable '" + n.op + "'");
        return it->second;
    }
    case K::Unary: {
        const Rational v = eval_node(*n.kids[0], env);
        if (n.op == "-")
            return -v;
        if (n.op == "!")
            return v == 0 ? 1 : 0;
        return v;
    }
    case K::Binary: {
        const Rational a = eval_node(*n.kids[0], env);
        if (n.op == "&&")
            return a != 0 && eval_node(*n.kids[1], env) != 0 ? 1 : 0;
        if (n.op == "||")
            return a != 0 || eval_node(*n.kids[1], env) != 0 ? 1 : 0;
        const Rational b = eval_node(*n.kids[1], env);
        if (n.op == "+")
            return a + b;
        if (n.op == "-")
            return a - b;
        if (n.op == "*")
            return a * b;
        if (n.op == "/") {
            if (b == 0)
                throw InvalidArgument("division by zero");
            return a / b;
        }
        if (n.op == "^") {
            const long e = as_long(b, "exponent");
            Rational r = 1;
            for (long i = 0; i < std::labs(e); ++i)
                r *= a;
            if (e < 0) {
                if (r == 0)
                    throw InvalidArgument("division by zero");
                r = 1 / r;
            }
            return r;
        }
        if (n.op == "==")
            return a == b ? 1 : 0;
        if (n.op == "!=")
            return a != b ? 1 : 0;
        if (n.op == "<")
            return a < b ? 1 : 0;
        if (n.op == "<=")
            return a <= b ? 1 : 0;
        if (n.op == ">")
            return a > b ? 1 : 0;
        if (n.op == ">=")
            return a >= b ? 1 : 0;
        throw InvalidArgument("unknown operator " + n.op);
    }
    case K::Call: {
        std::vector<Rational> args;
        for (const auto& k : n.kids)
            args.push_back(eval_node(*k, env));
        auto arity = [&](std::size_t m) {
            if (args.size() != m)
                throw InvalidArgument(n.op + " takes " + std::to_string(m) + " argument(s)");
        };
        if (n.op == "fact") {
            arity(1);
            const long v = as_long(args[0], "fact argument");
            if (v < 0)
                throw InvalidArgument("fact of a negative number");
            return Rational(factorial(static_cast<unsigned>(v)));
        }
        if (n.op == "binom") {
            arity(2);
            const long a = as_long(args[0], "binom argument"), b = as_long(args[1], "binom argument");
            if (a < 0 || b < 0 || b > a)
                return 0;
            return Rational(binomial(static_cast<unsigned>(a), static_cast<unsigned>(b)));
        }
        if (n.op == "min" || n.op == "max") {
            arity(2);
            return (n.op == "min") == (args[0] < args[1]) ? args[0] : args[1];
        }
        if (n.op == "floor") {
            arity(1);
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), args[0].get_num_mpz_t(), args[0].get_den_mpz_t());
            return Rational(q);
        }
        throw InvalidArgument("unknown function '" + n.op + "'");
    }
    }
    return 0;
}

}  // namespace

Expr Expr::parse(const std::string& text)
{
    Expr e;
    e.text_ = text;
    e.root_ = Parser(text).parse_all();
    return e;
}

Rational Expr::eval(const Env& env) const
{
    if (!root_)
        throw InvalidArgument("empty expression");
    return eval_node(*root_, env);
}

long Expr::eval_int(const Env& env) const { return as_long(eval(env), "'" + text_ + "'"); }

// ---------------------------------------------------------------------------
// Templates

Monomial instantiate_monomial(const std::string& pattern, const Env& env)
{
    std::array<int, kMaxGenus> ea{}, eb{};
    std::size_t i = 0;
    bool any = false;
    auto fail = [&](const std::string& why) -> void {
        throw InvalidArgument("monomial pattern '" + pattern + "': " + why);
    };
    while (i < pattern.size()) {
        const char c = pattern[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
            ++i;
            continue;
        }
        if (c != 'a' && c != 'b')
            fail("expected a variable a<i> or b<i>");
        ++i;
        std::size_t j = i;
        while (j < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[j])))
            ++j;
        if (j == i)
            fail("missing variable index");
        const int idx = std::stoi(pattern.substr(i, j - i));
        if (idx < 1 || idx > kMaxGenus)
            fail("variable index out of range");
        i = j;
        long e = 1;
        if (i < pattern.size() && pattern[i] == '^') {
            ++i;
            std::string ex;
            if (i < pattern.size() && pattern[i] == '(') {
                int depth = 0;
                std::size_t k = i;
                for (; k < pattern.size(); ++k) {
                    if (pattern[k] == '(')
                        ++depth;
                    else if (pattern[k] == ')' && --depth == 0)
                        break;
                }
                if (k == pattern.size())
                    fail("unbalanced parentheses");
                ex = pattern.substr(i, k + 1 - i);
                i = k + 1;
            } else {
                std::size_t k = i;
                while (k < pattern.size() && (std::isalnum(static_cast<unsigned char>(pattern[k])) || pattern[k] == '_'))
                    ++k;
                ex = pattern.substr(i, k - i);
                i = k;
            }
            if (ex.empty())
                fail("missing exponent");
            e = Expr::parse(ex).eval_int(env);
        }
        if (e < 0)
            fail("negative exponent " + std::to_string(e));
        (c == 'a' ? ea : eb)[static_cast<std::size_t>(idx - 1)] += static_cast<int>(e);
        any = true;
    }
    if (!any)
        fail("empty");
    return Monomial::from_exponents(ea, eb);
}

ChainElement instantiate_chain(const std::vector<TermTemplate>& terms, const Env& env, int genus)
{
    if (terms.empty())
        throw InvalidArgument("empty chain template");
    const int n = static_cast<int>(terms.front().factors.size());
    ChainElement out(genus, n);
    const SymplecticContext ctx(genus);
    for (const auto& t : terms) {
        if (static_cast<int>(t.factors.size()) != n)
            throw InvalidArgument("chain template mixes degrees");
        std::vector<SymElement> fs;
        for (const auto& f : t.factors) {
            const Monomial m = instantiate_monomial(f, env);
            if (!ctx.contains(m))
                throw InvalidArgument("monomial " + m.str() + " needs a larger genus");
            fs.emplace_back(m);
        }
        ChainElement x = wedge_of(fs, genus);
        x *= Expr::parse(t.coeff).eval(env);
        out += x;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Catalog file

namespace {

std::vector<TermTemplate> terms_from_json(const nlohmann::json& j)
{
    std::vector<TermTemplate> out;
    for (const auto& t : j) {
        TermTemplate tt;
        if (t.contains("coeff"))
            tt.coeff = t.at("coeff").is_string() ? t.at("coeff").get<std::string>()
                                                 : std::to_string(t.at("coeff").get<long>());
        tt.factors = t.at("factors").get<std::vector<std::string>>();
        tt.role = t.value("role", "");
        out.push_back(std::move(tt));
    }
    return out;
}

}  // namespace

Catalog Catalog::from_json(const nlohmann::json& j)
{
    Catalog cat;
    try {
        cat.schema = j.at("schema").get<std::string>();
        if (cat.schema != "cgplus-cycle-catalog/1")
            throw FormatError("unsupported catalog schema '" + cat.schema + "'");
        cat.genus = j.value("genus", 4);
        for (const auto& c : j.at("cases")) {
            CatalogCase cc;
            cc.id = c.at("id").get<std::string>();
            cc.description = c.value("description", "");
            cc.family = c.value("family", "klambda");
            cc.when = c.value("when", "1");
            cc.covers = c.value("covers", cc.family == "klambda" ? cc.when : "");
            cc.min_weight = c.value("min_weight", 4);
            if (c.contains("k"))
                cc.fixed_k = c.at("k").get<int>();
            if (c.contains("l"))
                cc.fixed_l = c.at("l").get<int>();
            if (c.contains("lambda"))
                cc.fixed_lambda = Partition::parse(c.at("lambda").get<std::string>());
            if (c.contains("omega"))
                cc.omega = terms_from_json(c.at("omega"));
            if (c.contains("image"))
                cc.image = terms_from_json(c.at("image"));
            if (c.contains("remainder"))
                for (const auto& r : c.at("remainder"))
                    cc.remainder.emplace_back(r.at(0).get<std::string>(), r.at(1).get<std::string>());
            cc.coefficient = c.value("coefficient", "");
            if (c.contains("boundary_checks"))
                for (const auto& b : c.at("boundary_checks"))
                    cc.boundary_checks.emplace_back(terms_from_json(b.at("chain")), terms_from_json(b.at("boundary")));
            cc.special = c.value("special", "");
            cc.extra = c.value("extra", nlohmann::json::object());
            cc.note = c.value("note", "");
            if (cc.family != "klambda" && cc.family != "pairs" && cc.family != "fixed")
                throw FormatError("case " + cc.id + ": unknown family '" + cc.family + "'");
            if (cc.family == "fixed" && (!cc.fixed_k || !cc.fixed_l || !cc.fixed_lambda))
                throw FormatError("case " + cc.id + ": fixed cases need k, l and lambda");
            // parse eagerly so syntax errors surface at load time
            Expr::parse(cc.when);
            if (!cc.covers.empty())
                Expr::parse(cc.covers);
            if (!cc.coefficient.empty())
                Expr::parse(cc.coefficient);
            cat.cases.push_back(std::move(cc));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed catalog: ") + e.what());
    }
    return cat;
}

Catalog Catalog::load(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw FormatError("cannot open catalog " + path.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return from_json(j);
}

const CatalogCase& Catalog::find(const std::string& id) const
{
    for (const auto& c : cases)
        if (c.id == id)
            return c;
    throw InvalidArgument("no catalog case '" + id + "'");
}

std::filesystem::path default_catalog_path()
{
    if (const char* env = std::getenv("CGPLUS_CATALOG"); env && *env)
        return env;
    return std::filesystem::path(CGPLUS_SOURCE_DIR) / "data" / "cycle_catalog.json";
}

// ---------------------------------------------------------------------------
// Instances

namespace {

const Decomposition& component_decomposition(int k, int l, int g)
{
    static std::map<std::tuple<int, int, int>, Decomposition> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    if (k < l)
        std::swap(k, l);
    auto key = std::make_tuple(k, l, g);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, k == l ? decompose_wedge_cg(k, g) : decompose_tensor_cg(k, l, g)).first;
    return it->second;
}

Env klambda_env(int k, int l, const Partition& lambda)
{
    const RhoData d(k, l, lambda);
    return {{"k", k}, {"l", l}, {"w", k + l}, {"lambda1", lambda[0]}, {"lambda2", lambda[1]}, {"rho", d.rho()}};
}

std::string env_str(const Env& env)
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : env) {
        os << (first ? "" : " ") << k << "=" << v.get_str();
        first = false;
    }
    return os.str();
}

}  // namespace

std::string CaseInstance::label() const
{
    std::ostringstream os;
    os << spec->id;
    if (spec->family == "pairs")
        os << " w=" << w << " k=" << env.at("k").get_str() << " m=" << env.at("m").get_str();
    else
        os << " k=" << k << " l=" << l << " lambda=" << lambda.str();
    return os.str();
}

std::vector<CaseInstance> instances_of(const CatalogCase& c, int max_weight)
{
    std::vector<CaseInstance> out;
    const Expr when = Expr::parse(c.when);
    if (c.family == "fixed") {
        CaseInstance ci;
        ci.spec = &c;
        ci.k = *c.fixed_k;
        ci.l = *c.fixed_l;
        ci.w = ci.k + ci.l;
        ci.lambda = *c.fixed_lambda;
        const RhoData d(ci.k, ci.l, ci.lambda);
        if (!d.rho_valid())
            throw InvalidArgument("case " + c.id + ": lambda " + ci.lambda.str() + " has no rho");
        ci.rho = d.rho();
        ci.env = klambda_env(ci.k, ci.l, ci.lambda);
        if (ci.w <= max_weight)
            out.push_back(std::move(ci));
        return out;
    }
    for (int w = c.min_weight; w <= max_weight; ++w) {
        if (c.family == "pairs") {
            for (int k = w / 2; k <= w - 1; ++k)
                for (int m = k + 1; m <= w - 1; ++m) {
                    CaseInstance ci;
                    ci.spec = &c;
                    ci.w = w;
                    ci.env = {{"w", w}, {"k", k}, {"m", m}};
                    if (when.eval_bool(ci.env))
                        out.push_back(std::move(ci));
                }
            continue;
        }
        for (int l = 1; 2 * l <= w; ++l) {
            const int k = w - l;
            for (const auto& [lambda, mult] : component_decomposition(k, l, 4).terms()) {
                CaseInstance ci;
                ci.spec = &c;
                ci.k = k;
                ci.l = l;
                ci.w = w;
                ci.lambda = lambda;
                ci.rho = RhoData(k, l, lambda).rho();
                ci.env = klambda_env(k, l, lambda);
                if (when.eval_bool(ci.env))
                    out.push_back(std::move(ci));
            }
        }
    }
    return out;
}

CoverageReport check_coverage(const Catalog& cat, int max_weight, int min_weight)
{
    CoverageReport rep;
    rep.min_weight = min_weight;
    rep.max_weight = max_weight;
    for (int w = min_weight; w <= max_weight; ++w)
        for (int l = 1; 2 * l <= w; ++l) {
            const int k = w - l;
            for (const auto& [lambda, mult] : component_decomposition(k, l, 4).terms()) {
                ++rep.triples;
                const Env env = klambda_env(k, l, lambda);
                std::vector<std::string> claims;
                for (const auto& c : cat.cases) {
                    if (c.covers.empty() || w < c.min_weight)
                        continue;
                    if (Expr::parse(c.covers).eval_bool(env))
                        claims.push_back(c.id);
                }
                const std::string what =
                    "k=" + std::to_string(k) + " l=" + std::to_string(l) + " lambda=" + lambda.str();
                if (claims.empty())
                    rep.uncovered.push_back(what);
                else if (claims.size() > 1) {
                    std::string s = what + " claimed by";
                    for (const auto& id : claims)
                        s += " " + id;
                    rep.overlapping.push_back(s);
                }
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Verification

bool InstanceReport::pass() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return !checks.empty();
}

nlohmann::json InstanceReport::to_json() const
{
    nlohmann::json j;
    j["case"] = case_id;
    j["instance"] = label;
    j["pass"] = pass();
    if (coefficient)
        j["coefficient"] = coefficient->get_str();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return j;
}

namespace {

std::string components_str(const ChainElement& x)
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, part] : x.by_component()) {
        os << (first ? "" : ", ") << "c(" << key[0] << ")^c(" << key[1] << ")";
        first = false;
    }
    return first ? "none" : os.str();
}

std::string short_str(const ChainElement& x, std::size_t limit = 400)
{
    std::string s = x.str();
    if (s.size() > limit)
        s = s.substr(0, limit) + " ...";
    return s;
}

bool lambda_in_component(const std::vector<int>& key, const Partition& lambda, int g)
{
    return component_decomposition(key[0], key[1], g).multiplicity(lambda) > 0;
}

void check(InstanceReport& rep, std::string name, bool pass, std::string detail = "")
{
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
}

void verify_weights(InstanceReport& rep, const ChainElement& omega, int w, const TorusWeight& mu)
{
    bool ok = !omega.is_zero();
    std::string bad = ok ? "" : "omega is zero";
    for (const auto& [wedge, c] : omega.terms()) {
        TorusWeight t(mu.size(), 0);
        int total = 0;
        for (const auto& f : wedge) {
            total += f.weight;
            const auto tw = MonomialBasis::get(omega.genus(), f.weight + 2)[f.index].torus_weight(omega.genus());
            for (std::size_t i = 0; i < t.size(); ++i)
                t[i] += tw[i];
        }
        if (total != w || t != mu) {
            ok = false;
            bad = "term " + wedge_str(wedge, omega.genus()) + " has weight " + std::to_string(total) +
                  " and torus weight " + weight_str(t);
            break;
        }
    }
    check(rep, "omega weight", ok, ok ? "weight " + std::to_string(w) + ", torus weight " + weight_str(mu) : bad);
}

void verify_klambda(const CaseInstance& inst, int g, InstanceReport& rep)
{
    const CatalogCase& c = *inst.spec;
    const std::vector<int> target{inst.k, inst.l};
    const auto pipeline = OperatorPipeline::detection(inst.rho, inst.lambda[1]);
    const ChainElement omega = instantiate_chain(c.omega, inst.env, g);
    verify_weights(rep, omega, inst.w, inst.lambda.as_weight(g));
    const ChainElement d = boundary(omega);
    const auto comps = d.by_component();

    // printed image
    if (!c.image.empty()) {
        ChainElement printed(g, 2);
        for (const auto& t : c.image)
            printed += instantiate_chain({t}, inst.env, g);
        const ChainElement residual = d - printed;
        bool ok = true;
        std::string detail = "matches";
        for (const auto& [key, part] : residual.by_component()) {
            bool allowed = false;
            for (const auto& [a, b] : c.remainder) {
                const long ka = Expr::parse(a).eval_int(inst.env), kb = Expr::parse(b).eval_int(inst.env);
                if (key == std::vector<int>{static_cast<int>(std::max(ka, kb)), static_cast<int>(std::min(ka, kb))})
                    allowed = true;
            }
            if (!allowed) {
                ok = false;
                detail = "unlisted terms in c(" + std::to_string(key[0]) + ")^c(" + std::to_string(key[1]) +
                         "): " + short_str(part);
                break;
            }
        }
        if (ok && !c.remainder.empty() && !residual.is_zero())
            detail = "matches up to terms in " + components_str(residual);
        check(rep, "printed image", ok, detail);

        for (std::size_t i = 0; i < c.image.size(); ++i) {
            const auto& t = c.image[i];
            if (t.role.empty())
                continue;
            const ChainElement x = instantiate_chain({t}, inst.env, g);
            const auto xc = x.by_component();
            const std::string name = "image term " + std::to_string(i + 1) + " " + t.role;
            if (xc.size() != 1) {
                check(rep, name, false, "term is zero or spans several components");
                continue;
            }
            const auto& key = xc.begin()->first;
            if (t.role == "absent") {
                const bool ok2 = !lambda_in_component(key, inst.lambda, g);
                check(rep, name, ok2,
                      "c(" + std::to_string(key[0]) + ")^c(" + std::to_string(key[1]) +
                          (ok2 ? ") has no " : ") contains ") + inst.lambda.str());
            } else if (t.role == "vanish") {
                if (key != target) {
                    check(rep, name, false, "term is not in the target component");
                    continue;
                }
                const TensorElement after = pipeline.apply(iota_chain(x));
                check(rep, name, after.is_zero(),
                      after.is_zero() ? "killed by " + pipeline.str() : "survives: " + after.str().substr(0, 200));
            } else if (t.role == "detect") {
                check(rep, name, key == target, key == target ? "in the target component" : "outside the target");
            } else {
                check(rep, name, false, "unknown role '" + t.role + "'");
            }
        }
    }

    // components other than the target must not contain lambda
    {
        bool ok = true;
        std::string detail;
        for (const auto& [key, part] : comps) {
            if (key == target)
                continue;
            if (lambda_in_component(key, inst.lambda, g)) {
                ok = false;
                detail += "c(" + std::to_string(key[0]) + ")^c(" + std::to_string(key[1]) + ") contains " +
                          inst.lambda.str() + "; ";
            }
        }
        if (ok)
            detail = "components: " + components_str(d);
        check(rep, "other components lack lambda", ok, detail);
    }

    // detection on the target component
    auto it = comps.find(target);
    Rational coeff = 0;
    if (it != comps.end())
        coeff = detect_highest_weight(it->second, inst.lambda, pipeline);
    rep.coefficient = coeff;
    check(rep, "detects lambda", coeff != 0, pipeline.str() + " gives " + coeff.get_str() + " a_" + inst.lambda.str());
    if (!c.coefficient.empty()) {
        const Rational want = Expr::parse(c.coefficient).eval(inst.env);
        check(rep, "coefficient", coeff == want, "expected " + want.get_str() + ", got " + coeff.get_str());
    }
}

void verify_pairs(const CaseInstance& inst, int g, InstanceReport& rep)
{
    const CatalogCase& c = *inst.spec;
    const ChainElement omega = instantiate_chain(c.omega, inst.env, g);
    const ChainElement d = boundary(omega);
    const ChainElement printed = instantiate_chain(c.image, inst.env, g);
    check(rep, "printed image", d == printed, d == printed ? "exact" : "boundary is " + short_str(d));
    for (std::size_t i = 0; i < c.boundary_checks.size(); ++i) {
        const auto& [chain, expected] = c.boundary_checks[i];
        const ChainElement got = boundary(instantiate_chain(chain, inst.env, g));
        const ChainElement want = instantiate_chain(expected, inst.env, g);
        check(rep, "boundary check " + std::to_string(i + 1), got == want,
              got == want ? "exact" : "got " + short_str(got));
    }
}

void verify_not_in_lambda3(const CaseInstance& inst, int g, InstanceReport& rep)
{
    static const Decomposition l3 = decompose_lambda3_c1(std::max(g, 3));
    const long m = l3.multiplicity(inst.lambda);
    check(rep, "absent from Lambda^3 c(1)", m == 0, "multiplicity " + std::to_string(m));
    const long in_target = component_decomposition(inst.k, inst.l, g).multiplicity(inst.lambda);
    check(rep, "present in the target", in_target > 0, "multiplicity " + std::to_string(in_target));
}

void verify_eta(const CaseInstance& inst, int g, InstanceReport& rep)
{
    const CatalogCase& c = *inst.spec;
    const auto& ex = c.extra;
    const ChainElement zeta = instantiate_chain(c.omega, inst.env, g);
    verify_weights(rep, zeta, inst.w, inst.lambda.as_weight(g));
    const ChainElement dz = boundary(zeta);
    const ChainElement printed = instantiate_chain(c.image, inst.env, g);
    check(rep, "printed image", dz == printed, dz == printed ? "exact" : "boundary is " + short_str(dz));

    // eta = (printed terms in the ambient component) + P_lambda(x)
    const auto amb_key = ex.at("ambient").get<std::vector<int>>();
    const Decomposition& ambient = component_decomposition(amb_key[0], amb_key[1], g);
    const ChainElement x = instantiate_chain(terms_from_json(ex.at("projected")), inst.env, g);
    const Casimir cas(g);
    const ChainElement px = cas.project(x, inst.lambda, ambient);
    const ChainElement ppx = cas.project(px, inst.lambda, ambient);
    check(rep, "projection is idempotent", ppx == px, std::to_string(px.terms().size()) + " terms");
    const ChainElement resid = x - px;
    const ChainElement presid = cas.project(resid, inst.lambda, ambient);
    check(rep, "x - P(x) has no lambda part", presid.is_zero());

    ChainElement eta = instantiate_chain(terms_from_json(ex.at("eta_terms")), inst.env, g);
    eta += px;
    const ChainElement d2 = boundary(eta);
    check(rep, "eta is a cycle", d2.is_zero(), d2.is_zero() ? "" : short_str(d2));

    // a preimage of eta in the lambda torus block
    const TorusWeight mu = inst.lambda.as_weight(g);
    const ChainBasis src = ChainBasis::build(g, 3, inst.w, mu);
    const ChainBasis dst = ChainBasis::build(g, 2, inst.w, mu);
    const SparseMatrix m = ce_differential(src, dst);
    const auto sol = solve_exact(m, coordinates(eta, dst));
    if (!sol) {
        check(rep, "eta is a boundary", false, "no preimage in block " + weight_str(mu));
        return;
    }
    const ChainElement zeta2 = from_coordinates(src, *sol);
    check(rep, "eta is a boundary", boundary(zeta2) == eta,
          "preimage with " + std::to_string(zeta2.terms().size()) + " terms in a " + std::to_string(m.rows()) +
              " x " + std::to_string(m.cols()) + " block");

    // d(zeta - zeta') = target term + x - P(x)
    const ChainElement final_d = boundary(zeta - zeta2);
    ChainElement expected = instantiate_chain(terms_from_json(ex.at("target")), inst.env, g);
    expected += resid;
    check(rep, "boundary of zeta - zeta'", final_d == expected, final_d == expected ? "" : short_str(final_d - expected));

    const auto comps = final_d.by_component();
    const auto it = comps.find(std::vector<int>{inst.k, inst.l});
    const auto pipeline = OperatorPipeline::detection(inst.rho, inst.lambda[1]);
    const Rational coeff = it == comps.end() ? Rational(0) : detect_highest_weight(it->second, inst.lambda, pipeline);
    rep.coefficient = coeff;
    check(rep, "detects lambda", coeff != 0, pipeline.str() + " gives " + coeff.get_str() + " a_" + inst.lambda.str());
    if (!c.coefficient.empty()) {
        const Rational want = Expr::parse(c.coefficient).eval(inst.env);
        check(rep, "coefficient", coeff == want, "expected " + want.get_str() + ", got " + coeff.get_str());
    }
}

}  // namespace

InstanceReport verify_instance(const CaseInstance& inst, int genus)
{
    InstanceReport rep;
    rep.case_id = inst.spec->id;
    rep.label = inst.label();
    try {
        if (inst.spec->special == "not_in_lambda3")
            verify_not_in_lambda3(inst, genus, rep);
        else if (inst.spec->special == "eta")
            verify_eta(inst, genus, rep);
        else if (inst.spec->family == "pairs")
            verify_pairs(inst, genus, rep);
        else if (inst.spec->special.empty())
            verify_klambda(inst, genus, rep);
        else
            check(rep, "special", false, "unknown special '" + inst.spec->special + "'");
    } catch (const Error& e) {
        check(rep, "evaluation", false, std::string(e.what()) + " [" + env_str(inst.env) + "]");
    }
    return rep;
}

bool VerifyReport::pass() const
{
    if (coverage && !coverage->pass())
        return false;
    for (const auto& r : instances)
        if (!r.pass())
            return false;
    return !instances.empty();
}

nlohmann::json VerifyReport::to_json(bool timings) const
{
    nlohmann::json j;
    j["schema"] = "cgplus-verify-report/1";
    j["genus"] = genus;
    j["max_weight"] = max_weight;
    j["pass"] = pass();
    if (timings)
        j["seconds"] = seconds;
    std::size_t passed = 0;
    for (const auto& r : instances)
        passed += r.pass() ? 1 : 0;
    j["instances_passed"] = passed;
    j["instances_total"] = instances.size();
    if (coverage)
        j["coverage"] = {{"pass", coverage->pass()},
                         {"min_weight", coverage->min_weight},
                         {"max_weight", coverage->max_weight},
                         {"triples", coverage->triples},
                         {"uncovered", coverage->uncovered},
                         {"overlapping", coverage->overlapping}};
    j["instances"] = nlohmann::json::array();
    for (const auto& r : instances)
        j["instances"].push_back(r.to_json());
    return j;
}

VerifyReport verify_catalog(const Catalog& cat, const VerifyOptions& opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.genus = cat.genus;
    rep.max_weight = opts.max_weight;
    for (const auto& id : opts.only_cases)
        cat.find(id);
    std::vector<CaseInstance> todo;
    for (const auto& c : cat.cases) {
        if (!opts.only_cases.empty() &&
            std::find(opts.only_cases.begin(), opts.only_cases.end(), c.id) == opts.only_cases.end())
            continue;
        for (auto& inst : instances_of(c, opts.max_weight))
            if (!opts.only_weight || inst.w == *opts.only_weight)
                todo.push_back(std::move(inst));
    }
    rep.instances.resize(todo.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < todo.size();)
            rep.instances[i] = verify_instance(todo[i], cat.genus);
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(todo.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (opts.coverage && opts.only_cases.empty() && !opts.only_weight)
        rep.coverage = check_coverage(cat, opts.max_weight);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace cgplus
