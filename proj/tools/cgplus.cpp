// Command-line front end: homology, decompose, verify, euler, cache.

#include "cgplus/cycle_catalog.hpp"
#include "cgplus/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <thread>

using namespace cgplus;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kResource = 3, kFormat = 4 };

struct Common {
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string mode = "auto";
    std::string primes;
    std::string cache_dir;
    bool no_cache = false;
    std::string out = "json";
    bool stable = false;
    std::size_t exact_threshold = RankPolicy{}.exact_threshold;
};

void add_common(CLI::App* app, Common& c, bool rank_opts)
{
    app->add_option("--jobs,-j", c.jobs, "Parallel workers")->check(CLI::PositiveNumber);
    app->add_flag("--stable", c.stable, "Omit timings and cache-hit fields (reproducible output)");
    if (!rank_opts)
        return;
    app->add_option("--mode", c.mode, "Rank mode")->check(CLI::IsMember({"exact", "modular", "auto"}));
    app->add_option("--primes", c.primes, "Comma separated primes below 2^32 for modular ranks");
    app->add_option("--exact-threshold", c.exact_threshold, "Auto mode: exact elimination below this many columns");
    app->add_option("--cache-dir", c.cache_dir, "Matrix cache directory (default $CGPLUS_CACHE or ./cache)");
    app->add_flag("--no-cache", c.no_cache, "Do not read or write the matrix cache");
}

RankPolicy make_policy(const Common& c)
{
    RankPolicy p;
    p.mode = parse_rank_mode(c.mode);
    p.exact_threshold = c.exact_threshold;
    if (!c.primes.empty()) {
        p.primes.clear();
        std::stringstream ss(c.primes);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                p.primes.push_back(std::stoull(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw InvalidArgument("bad prime '" + item + "'");
            }
        }
        if (p.primes.empty())
            throw InvalidArgument("--primes is empty");
    }
    return p;
}

std::optional<MatrixCache> make_cache(const Common& c)
{
    if (c.no_cache)
        return std::nullopt;
    return MatrixCache(c.cache_dir.empty() ? default_cache_root() : std::filesystem::path(c.cache_dir));
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

void check_genus(int g)
{
    if (g < 1 || g > kMaxGenus)
        throw InvalidArgument("g must lie in 1.." + std::to_string(kMaxGenus));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Homology of the positive part of the symplectic Lie algebra of polynomials"};
    app.require_subcommand(1);

    Common common;

    // homology
    int hg = 4, hn = 2, hw = 2;
    bool h_all_blocks = false, h_no_decompose = false, h_progress = false;
    std::vector<std::string> h_blocks;
    auto* homology = app.add_subcommand("homology", "Dimension of H_n(c^+)_w per torus block");
    homology->add_option("--g", hg, "Genus")->required();
    homology->add_option("--n", hn, "Homological degree")->required()->check(CLI::PositiveNumber);
    homology->add_option("--w", hw, "Weight")->required()->check(CLI::PositiveNumber);
    homology->add_option("--block", h_blocks, "Restrict to dominant blocks, e.g. 2,0,0,0");
    homology->add_flag("--all-blocks", h_all_blocks, "Compute every torus block, not only dominant ones");
    homology->add_flag("--no-decompose", h_no_decompose, "Skip the Sp decomposition");
    homology->add_flag("--progress", h_progress, "Print finished blocks on stderr");
    homology->add_option("--out", common.out, "Output format")->check(CLI::IsMember({"json", "csv"}));
    add_common(homology, common, true);

    // decompose
    std::string d_kind = "tensor", d_method = "closed";
    int dk = 2, dl = 1, dg = 4;
    auto* decompose = app.add_subcommand("decompose", "Sp decomposition of c(k)(x)c(l), Lambda^2 c(k) or Lambda^3 c(1)");
    decompose->add_option("--kind", d_kind, "Module")->check(CLI::IsMember({"tensor", "wedge", "lambda3c1"}));
    decompose->add_option("--k", dk, "k")->check(CLI::PositiveNumber);
    decompose->add_option("--l", dl, "l (tensor only)")->check(CLI::PositiveNumber);
    decompose->add_option("--g", dg, "Genus");
    decompose->add_option("--method", d_method, "closed (listed formula) or lr (Pieri/plethysm with branching)")
        ->check(CLI::IsMember({"closed", "lr"}));
    add_common(decompose, common, false);

    // verify
    std::vector<std::string> v_cases;
    bool v_all = false;
    int v_g = 0, v_max_weight = 6;
    std::optional<int> v_w;
    std::string v_catalog;
    bool v_brief = false;
    auto* verify = app.add_subcommand("verify", "Check the cycle catalog");
    verify->add_option("--case", v_cases, "Case label (repeatable)");
    verify->add_flag("--all", v_all, "Every case");
    verify->add_option("--g", v_g, "Genus (at least 4; default from the catalog)");
    verify->add_option("--max-weight", v_max_weight, "Largest k + l instantiated")->check(CLI::PositiveNumber);
    verify->add_option("--w", v_w, "Only instances of this weight");
    verify->add_option("--catalog", v_catalog, "Catalog file (default $CGPLUS_CATALOG or the bundled one)");
    verify->add_flag("--brief", v_brief, "Only the summary and failing instances");
    add_common(verify, common, false);

    // euler
    int eg = 4, ew = 4;
    std::vector<std::string> e_blocks;
    auto* euler = app.add_subcommand("euler", "Per-block Euler characteristic cross-check in weight w");
    euler->add_option("--g", eg, "Genus")->required();
    euler->add_option("--w", ew, "Weight")->required()->check(CLI::PositiveNumber);
    euler->add_option("--block", e_blocks, "Restrict to dominant blocks");
    add_common(euler, common, true);

    // cache
    auto* cache = app.add_subcommand("cache", "Manage stored differential matrices");
    cache->require_subcommand(1);
    int cg = 4, cn = 2, cw = 2;
    std::vector<std::string> c_blocks;
    auto* cache_build = cache->add_subcommand("build", "Build and store d_n for every dominant block");
    cache_build->add_option("--g", cg, "Genus")->required();
    cache_build->add_option("--n", cn, "Degree of the differential (source Lambda^n)")->required();
    cache_build->add_option("--w", cw, "Weight")->required();
    cache_build->add_option("--block", c_blocks, "Restrict to dominant blocks");
    add_common(cache_build, common, false);
    cache_build->add_option("--cache-dir", common.cache_dir, "Cache directory");
    auto* cache_ls = cache->add_subcommand("ls", "List stored matrices");
    cache_ls->add_option("--cache-dir", common.cache_dir, "Cache directory");
    cache_ls->add_option("--out", common.out, "Output format")->check(CLI::IsMember({"json", "text"}));
    auto* cache_clear = cache->add_subcommand("clear", "Remove stored matrices");
    cache_clear->add_option("--cache-dir", common.cache_dir, "Cache directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    auto parse_blocks = [](const std::vector<std::string>& in, int g) {
        std::vector<TorusWeight> out;
        for (const auto& s : in) {
            TorusWeight mu = parse_weight(s);
            if (static_cast<int>(mu.size()) != g)
                throw InvalidArgument("block " + s + " does not have " + std::to_string(g) + " entries");
            if (!is_dominant(mu))
                throw InvalidArgument("block " + s + " is not dominant");
            out.push_back(std::move(mu));
        }
        return out;
    };

    try {
        if (*homology) {
            check_genus(hg);
            HomologyOptions opts;
            opts.policy = make_policy(common);
            opts.jobs = common.jobs;
            opts.all_blocks = h_all_blocks;
            opts.only_blocks = parse_blocks(h_blocks, hg);
            auto mc = make_cache(common);
            opts.cache = mc ? &*mc : nullptr;
            if (h_progress)
                opts.on_block = [](const BlockHomology& b) {
                    std::cerr << "block " << weight_str(b.mu) << " dim " << b.chain_dim << " H " << b.homology << "\n";
                };
            const HomologyResult r = homology_dims(hg, hn, hw, opts);
            if (common.out == "csv")
                std::cout << homology_csv(r, !common.stable);
            else
                emit(homology_json(r, !common.stable, !h_no_decompose && opts.only_blocks.empty()));
            return r.certified ? kOk : kFailed;
        }
        if (*decompose) {
            check_genus(dg);
            Decomposition d;
            const bool lr = d_method == "lr";
            if (d_kind == "tensor")
                d = lr ? decompose_tensor_cg_lr(dk, dl, dg) : decompose_tensor_cg(dk, dl, dg);
            else if (d_kind == "wedge")
                d = lr ? decompose_wedge_cg_plethysm(dk, dg) : decompose_wedge_cg(dk, dg);
            else
                d = decompose_lambda3_c1(dg);
            nlohmann::json j;
            j["schema"] = "cgplus-decomposition/1";
            j["input"] = {{"kind", d_kind}, {"g", dg}, {"method", d_method}};
            if (d_kind != "lambda3c1")
                j["input"]["k"] = dk;
            if (d_kind == "tensor")
                j["input"]["l"] = dl;
            j["text"] = d.str();
            j["terms"] = d.to_json(dg);
            j["distinct"] = d.distinct();
            j["count"] = d.count();
            j["total_dim"] = d.total_dim(dg).get_str();
            emit(j);
            return kOk;
        }
        if (*verify) {
            if (!v_all && v_cases.empty())
                throw InvalidArgument("verify needs --all or --case LABEL");
            Catalog cat = Catalog::load(v_catalog.empty() ? default_catalog_path() : std::filesystem::path(v_catalog));
            if (v_g) {
                if (v_g < 4 || v_g > kMaxGenus)
                    throw InvalidArgument("the catalog uses a_4, b_4: need 4 <= g <= " + std::to_string(kMaxGenus));
                cat.genus = v_g;
            }
            VerifyOptions opts;
            opts.max_weight = v_w ? std::max(v_max_weight, *v_w) : v_max_weight;
            opts.only_weight = v_w;
            if (!v_all)
                opts.only_cases = v_cases;
            opts.jobs = common.jobs;
            const VerifyReport r = verify_catalog(cat, opts);
            nlohmann::json j = r.to_json(!common.stable);
            if (v_brief) {
                nlohmann::json failing = nlohmann::json::array();
                for (const auto& inst : j["instances"])
                    if (!inst["pass"].get<bool>())
                        failing.push_back(inst);
                j["instances"] = failing;
            }
            emit(j);
            return r.pass() ? kOk : kFailed;
        }
        if (*euler) {
            check_genus(eg);
            HomologyOptions opts;
            opts.policy = make_policy(common);
            opts.jobs = common.jobs;
            opts.only_blocks = parse_blocks(e_blocks, eg);
            auto mc = make_cache(common);
            opts.cache = mc ? &*mc : nullptr;
            const EulerReport r = euler_check(eg, ew, opts);
            emit(r.to_json(!common.stable));
            return r.pass() && r.certified() ? kOk : kFailed;
        }
        if (*cache) {
            const MatrixCache mc(common.cache_dir.empty() ? default_cache_root() : std::filesystem::path(common.cache_dir));
            if (*cache_build) {
                check_genus(cg);
                if (cn < 2 || cw < 1)
                    throw InvalidArgument("cache build needs n >= 2 and w >= 1");
                std::vector<TorusWeight> mus = parse_blocks(c_blocks, cg);
                if (mus.empty())
                    for (const auto& [mu, d] : chain_block_dims(cg, cn, cw))
                        if (is_dominant(mu))
                            mus.push_back(mu);
                nlohmann::json j;
                j["schema"] = "cgplus-cache-build/1";
                j["input"] = {{"g", cg}, {"n", cn}, {"w", cw}};
                j["blocks"] = nlohmann::json::array();
                for (const auto& mu : mus) {
                    bool hit = false;
                    const auto t0 = std::chrono::steady_clock::now();
                    const SparseMatrix m = block_differential(cg, cn, cw, mu, &mc, &hit, common.jobs);
                    nlohmann::json e{{"mu", weight_str(mu)}, {"rows", m.rows()}, {"cols", m.cols()}, {"nnz", m.nnz()}};
                    if (!common.stable) {
                        e["cache_hit"] = hit;
                        e["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    }
                    j["blocks"].push_back(std::move(e));
                }
                emit(j);
                return kOk;
            }
            if (*cache_ls) {
                const auto entries = mc.list();
                if (common.out == "text") {
                    for (const auto& e : entries)
                        std::cout << e.path.filename().string() << "  g=" << e.header.g << " n=" << e.header.n
                                  << " w=" << e.header.w << " block=" << e.header.block << " " << e.rows << "x"
                                  << e.cols << " nnz=" << e.nnz << " bytes=" << e.bytes << "\n";
                    return kOk;
                }
                nlohmann::json j;
                j["schema"] = "cgplus-cache-list/1";
                j["root"] = mc.root().string();
                j["entries"] = nlohmann::json::array();
                for (const auto& e : entries)
                    j["entries"].push_back({{"file", e.path.filename().string()},
                                            {"version", e.header.version},
                                            {"g", e.header.g},
                                            {"n", e.header.n},
                                            {"w", e.header.w},
                                            {"block", e.header.block},
                                            {"rows", e.rows},
                                            {"cols", e.cols},
                                            {"nnz", e.nnz},
                                            {"bytes", e.bytes}});
                emit(j);
                return kOk;
            }
            if (*cache_clear) {
                const std::size_t n = mc.clear();
                emit({{"schema", "cgplus-cache-clear/1"}, {"root", mc.root().string()}, {"removed", n}});
                return kOk;
            }
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kResource;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kFormat;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kOk;
}
