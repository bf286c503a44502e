#include <doctest.h>

#include "cgplus/cycle_catalog.hpp"

using namespace cgplus;

namespace {

Rational ev(const char* text, const Env& env = {}) { return Expr::parse(text).eval(env); }

const Catalog& bundled()
{
    static const Catalog c = Catalog::load(default_catalog_path());
    return c;
}

std::vector<InstanceReport> run(const char* id, int max_weight)
{
    std::vector<InstanceReport> out;
    for (const auto& inst : instances_of(bundled().find(id), max_weight))
        out.push_back(verify_instance(inst, bundled().genus));
    return out;
}

}  // namespace

TEST_CASE("expression arithmetic")
{
    CHECK(ev("1 + 2 * 3") == 7);
    CHECK(ev("(1 + 2) * 3") == 9);
    CHECK(ev("2 ^ 3 ^ 2") == 512);
    CHECK(ev("-2 ^ 2") == -4);
    CHECK(ev("7 / 2") == Rational(7, 2));
    CHECK(ev("floor(7 / 2)") == 3);
    CHECK(ev("fact(5) - binom(6, 2)") == 105);
    CHECK(ev("min(3, -1) + max(2, 8)") == 7);
    CHECK(ev("1 + (2 == 2)") == 2);
    CHECK(ev("3 >= 2 && !(1 > 2) || 0") == 1);
    CHECK(ev("k - rho", {{"k", 5}, {"rho", 2}}) == 3);
}

TEST_CASE("expression errors")
{
    CHECK_THROWS_AS(Expr::parse("1 +"), InvalidArgument);
    CHECK_THROWS_AS(Expr::parse("(1"), InvalidArgument);
    CHECK_THROWS_AS(Expr::parse("1 $ 2"), InvalidArgument);
    CHECK_THROWS_AS(ev("x + 1"), InvalidArgument);
    CHECK_THROWS_AS(ev("1 / 0"), InvalidArgument);
    CHECK_THROWS_AS(ev("fact(-1)"), InvalidArgument);
    CHECK_THROWS_AS(ev("binom(1)"), InvalidArgument);
    CHECK_THROWS_AS(ev("sqrt(4)"), InvalidArgument);
    CHECK_THROWS_AS(Expr::parse("7 / 2").eval_int({}), InvalidArgument);
}

TEST_CASE("monomial templates")
{
    const Env env{{"k", 4}, {"rho", 2}};
    CHECK(instantiate_monomial("a1^(k-rho) a3^rho b4", env) == Monomial::parse("a1^2 a3^2 b4"));
    CHECK(instantiate_monomial("a1^(k-4) a2", env) == Monomial::parse("a2"));
    CHECK_THROWS_AS(instantiate_monomial("a1^(rho-k)", env), InvalidArgument);
    CHECK_THROWS_AS(instantiate_monomial("a1^", env), InvalidArgument);
    const ChainElement x = instantiate_chain({{"2", {"a1^2 a4", "a1^2 b4"}, ""}}, env, 4);
    CHECK(x.degree() == 2);
    CHECK(x.terms().size() == 1);
    CHECK(x.terms().begin()->second == 2);
}

TEST_CASE("catalog loading")
{
    const Catalog& c = bundled();
    CHECK(c.schema == "cgplus-cycle-catalog/1");
    CHECK(c.genus == 4);
    CHECK(c.find("III-iii-b").special == "eta");
    CHECK_THROWS_AS(c.find("no-such-case"), InvalidArgument);
    CHECK_THROWS_AS(Catalog::from_json(nlohmann::json{{"schema", "other/9"}, {"cases", nlohmann::json::array()}}),
                    FormatError);
    CHECK_THROWS_AS(Catalog::load("/nonexistent/catalog.json"), FormatError);
}

TEST_CASE("coverage is a partition of the admissible triples")
{
    const CoverageReport r = check_coverage(bundled(), 6);
    CHECK(r.pass());
    CHECK(r.triples == 78);
    Catalog partial = bundled();
    partial.cases.erase(partial.cases.begin());
    CHECK_FALSE(check_coverage(partial, 6).uncovered.empty());
    Catalog doubled = bundled();
    doubled.cases.push_back(doubled.cases.front());
    doubled.cases.back().id = "copy";
    CHECK_FALSE(check_coverage(doubled, 6).overlapping.empty());
}

TEST_CASE("case I in c(3) (x) c(1)")
{
    // [6] has rho = 1 there and belongs to case II-ii; case I starts at [8]
    CHECK(RhoData(3, 1, Partition::parse("[6]")).rho() == 1);
    bool found = false;
    for (const auto& r : run("I", 4))
        if (r.label == "I k=3 l=1 lambda=[8]") {
            found = true;
            CHECK(r.pass());
            REQUIRE(r.coefficient);
            CHECK(*r.coefficient != 0);
        }
    CHECK(found);
}

TEST_CASE("case II-i coefficients")
{
    for (const auto& inst : instances_of(bundled().find("II-i"), 6)) {
        const InstanceReport r = verify_instance(inst, 4);
        CHECK_MESSAGE(r.pass(), r.label);
        REQUIRE(r.coefficient);
        if (inst.k > inst.l) {
            const long l2 = inst.lambda[1];
            const Integer expect = factorial(static_cast<unsigned>(inst.k + 1)) *
                                       factorial(static_cast<unsigned>(inst.l + 1 - l2)) * factorial(static_cast<unsigned>(l2)) +
                                   factorial(static_cast<unsigned>(inst.k)) *
                                       factorial(static_cast<unsigned>(inst.l + 2 - l2)) * factorial(static_cast<unsigned>(l2));
            CHECK(*r.coefficient == Rational(expect));
        }
    }
}

TEST_CASE("case II-ii gives v(k) - v(m) exactly")
{
    bool found = false;
    for (const auto& r : run("II-ii", 4)) {
        CHECK_MESSAGE(r.pass(), r.label);
        found = found || r.label == "II-ii w=4 k=2 m=3";
    }
    CHECK(found);
}

TEST_CASE("case III-iii-b: eta is a cycle with a preimage")
{
    const auto reports = run("III-iii-b", 6);
    REQUIRE(reports.size() == 1);
    for (const auto& c : reports[0].checks)
        CHECK_MESSAGE(c.pass, c.name, ": ", c.detail);
    REQUIRE(reports[0].coefficient);
    CHECK(*reports[0].coefficient == -72);
}

TEST_CASE("a wrong printed image is caught")
{
    Catalog c = bundled();
    for (auto& cc : c.cases)
        if (cc.id == "III-i")
            cc.image[0].coeff = "rho";
    VerifyOptions o;
    o.only_cases = {"III-i"};
    o.max_weight = 5;
    const VerifyReport r = verify_catalog(c, o);
    CHECK_FALSE(r.instances.empty());
    CHECK_FALSE(r.pass());
}

TEST_CASE("verify report is reproducible")
{
    VerifyOptions o;
    o.max_weight = 5;
    o.jobs = 3;
    const VerifyReport a = verify_catalog(bundled(), o);
    o.jobs = 1;
    const VerifyReport b = verify_catalog(bundled(), o);
    CHECK(a.pass());
    CHECK(a.to_json(false).dump() == b.to_json(false).dump());
}
