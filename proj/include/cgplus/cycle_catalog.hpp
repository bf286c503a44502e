#pragma once

// Data-driven verification of explicit 3-chains: a small expression
// language for parametrized monomials, the catalog file format and the
// per-instance checks.

#include "cgplus/hwv_lab.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cgplus {

using Env = std::map<std::string, Rational>;

/// Integer/rational expressions: + - * / ^, comparisons, && || !, and the
/// functions fact, binom, min, max, floor. Comparisons evaluate to 0 or 1.
class Expr {
public:
    struct Node;

    Expr() = default;
    static Expr parse(const std::string& text);

    Rational eval(const Env& env) const;
    /// Throws InvalidArgument unless the value is an integer fitting a long.
    long eval_int(const Env& env) const;
    bool eval_bool(const Env& env) const { return eval(env) != 0; }
    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

/// "a1^2 a4", "a1^(k-rho) a3^rho b4": exponents are integers, names or
/// parenthesized expressions. Negative exponents throw InvalidArgument.
Monomial instantiate_monomial(const std::string& pattern, const Env& env);

struct TermTemplate {
    std::string coeff = "1";
    std::vector<std::string> factors;
    /// For printed images: "detect", "vanish" or "absent".
    std::string role;
};

/// Sum of coeff * f_1 ^ ... ^ f_n over the terms.
ChainElement instantiate_chain(const std::vector<TermTemplate>& terms, const Env& env, int genus);

struct CatalogCase {
    std::string id;
    std::string description;
    /// "klambda": every (k, l, lambda) of weight w satisfying `when`;
    /// "pairs": floor(w/2) <= k < m <= w-1;  "fixed": one explicit instance.
    std::string family = "klambda";
    std::string when = "1";
    /// Which (k, l, lambda) this case accounts for, for the coverage check.
    std::string covers;
    int min_weight = 4;
    std::optional<int> fixed_k, fixed_l;
    std::optional<Partition> fixed_lambda;
    std::vector<TermTemplate> omega;
    std::vector<TermTemplate> image;
    /// Weight pairs (k', l') where terms not printed in `image` may live.
    std::vector<std::pair<std::string, std::string>> remainder;
    std::string coefficient;
    std::vector<std::pair<std::vector<TermTemplate>, std::vector<TermTemplate>>> boundary_checks;
    /// "eta" or "not_in_lambda3"; empty for ordinary cases.
    std::string special;
    nlohmann::json extra;
    std::string note;
};

struct Catalog {
    std::string schema;
    int genus = 4;
    std::vector<CatalogCase> cases;

    static Catalog from_json(const nlohmann::json& j);
    static Catalog load(const std::filesystem::path& path);
    const CatalogCase& find(const std::string& id) const;
};

/// Location of the catalog shipped with the sources.
std::filesystem::path default_catalog_path();

struct CaseInstance {
    const CatalogCase* spec = nullptr;
    int k = 0, l = 0, w = 0;
    Partition lambda;
    int rho = 0;
    Env env;
    std::string label() const;
};

/// Instances of one case up to the given weight.
std::vector<CaseInstance> instances_of(const CatalogCase& c, int max_weight);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct InstanceReport {
    std::string case_id;
    std::string label;
    std::vector<CheckResult> checks;
    std::optional<Rational> coefficient;
    bool pass() const;
    nlohmann::json to_json() const;
};

InstanceReport verify_instance(const CaseInstance& inst, int genus);

struct CoverageReport {
    int min_weight = 4, max_weight = 0;
    std::size_t triples = 0;
    std::vector<std::string> uncovered;
    std::vector<std::string> overlapping;
    bool pass() const { return uncovered.empty() && overlapping.empty(); }
};

/// Every (k, l, lambda) with min_weight <= k + l <= max_weight must be
/// claimed by exactly one case.
CoverageReport check_coverage(const Catalog& cat, int max_weight, int min_weight = 4);

struct VerifyOptions {
    int max_weight = 6;
    std::vector<std::string> only_cases;
    /// Restrict to instances of this weight.
    std::optional<int> only_weight;
    bool coverage = true;
    unsigned jobs = 1;
};

struct VerifyReport {
    int genus = 4;
    int max_weight = 0;
    std::vector<InstanceReport> instances;
    std::optional<CoverageReport> coverage;
    double seconds = 0;
    bool pass() const;
    nlohmann::json to_json(bool timings = true) const;
};

VerifyReport verify_catalog(const Catalog& cat, const VerifyOptions& opts = {});

}  // namespace cgplus
