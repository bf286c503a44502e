#include "cgplus/report.hpp"

#include <chrono>
#include <set>
#include <sstream>

namespace cgplus {

nlohmann::json to_json(const RankCertificate& c)
{
    nlohmann::json j{{"method", to_string(c.method)}, {"rank", c.rank}};
    if (c.method == RankMethod::Modular) {
        j["primes"] = c.primes;
        j["prime_ranks"] = c.prime_ranks;
        j["agreement"] = c.agreement;
    }
    return j;
}

Decomposition homology_decomposition(const HomologyResult& r)
{
    if (r.all_blocks)
        return decompose_from_weight_dims(r.weight_dims(), r.g);
    std::map<TorusWeight, Integer> dims;
    for (const auto& b : r.blocks)
        if (b.homology)
            dims[b.mu] = static_cast<unsigned long>(b.homology);
    return decompose_from_weight_dims(dims, r.g);
}

nlohmann::json homology_json(const HomologyResult& r, bool timings, bool decompose)
{
    nlohmann::json j;
    j["schema"] = "cgplus-homology/1";
    j["input"] = {{"g", r.g}, {"n", r.n}, {"w", r.w}, {"blocks", r.all_blocks ? "all" : "dominant"}};
    j["total"] = r.total.get_str();
    j["certified"] = r.certified;
    j["modular"] = r.any_modular;
    if (decompose) {
        const Decomposition d = homology_decomposition(r);
        j["decomposition"] = {{"text", d.str()}, {"terms", d.to_json(r.g)}};
    }
    j["blocks"] = nlohmann::json::array();
    for (const auto& b : r.blocks) {
        nlohmann::json e{{"mu", weight_str(b.mu)}, {"orbit", b.orbit},         {"chain_dim", b.chain_dim},
                         {"rank_in", b.rank_in},  {"rank_out", b.rank_out}, {"homology", b.homology}};
        if (b.in)
            e["certificate_in"] = to_json(b.in->cert);
        if (b.out)
            e["certificate_out"] = to_json(b.out->cert);
        if (timings) {
            e["cache_hit_in"] = b.cache_hit_in;
            e["cache_hit_out"] = b.cache_hit_out;
            e["build_seconds"] = b.build_seconds;
            e["rank_seconds"] = b.rank_seconds;
        }
        j["blocks"].push_back(std::move(e));
    }
    if (timings)
        j["seconds"] = r.seconds;
    return j;
}

std::string homology_csv(const HomologyResult& r, bool timings)
{
    std::ostringstream os;
    os << "mu,orbit,chain_dim,rank_in,rank_out,homology,method_in,method_out";
    if (timings)
        os << ",build_seconds,rank_seconds";
    os << "\n";
    auto method = [](const std::optional<RankOutcome>& o) { return o ? to_string(o->cert.method) : std::string(); };
    for (const auto& b : r.blocks) {
        os << '"' << weight_str(b.mu) << "\"," << b.orbit << "," << b.chain_dim << "," << b.rank_in << ","
           << b.rank_out << "," << b.homology << "," << method(b.in) << "," << method(b.out);
        if (timings)
            os << "," << b.build_seconds << "," << b.rank_seconds;
        os << "\n";
    }
    return os.str();
}

bool EulerReport::certified() const
{
    for (const auto& d : degrees)
        if (!d.certified)
            return false;
    return true;
}

bool EulerReport::pass() const
{
    for (const auto& b : blocks)
        if (!b.pass())
            return false;
    return !blocks.empty();
}

nlohmann::json EulerReport::to_json(bool timings) const
{
    nlohmann::json j;
    j["schema"] = "cgplus-euler/1";
    j["input"] = {{"g", g}, {"w", w}};
    j["pass"] = pass();
    j["certified"] = certified();
    nlohmann::json totals = nlohmann::json::array();
    for (const auto& d : degrees)
        totals.push_back({{"n", d.n}, {"total", d.total.get_str()}, {"certified", d.certified}});
    j["homology"] = totals;
    j["blocks"] = nlohmann::json::array();
    for (const auto& b : blocks) {
        nlohmann::json e{{"mu", weight_str(b.mu)},
                         {"chi_chain", b.chi_chain.get_str()},
                         {"chi_homology", b.chi_homology.get_str()},
                         {"pass", b.pass()}};
        std::vector<std::string> c, h;
        for (const auto& x : b.chain)
            c.push_back(x.get_str());
        for (const auto& x : b.homology)
            h.push_back(x.get_str());
        e["chain_dims"] = c;
        e["homology_dims"] = h;
        j["blocks"].push_back(std::move(e));
    }
    if (timings)
        j["seconds"] = seconds;
    return j;
}

EulerReport euler_check(int g, int w, const HomologyOptions& opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    EulerReport rep;
    rep.g = g;
    rep.w = w;
    if (opts.all_blocks)
        throw InvalidArgument("the Euler check runs on dominant blocks");
    // d_{n+1} is needed by degrees n and n + 1; compute it once
    RankMemo local_memo;
    HomologyOptions o = opts;
    if (!o.memo)
        o.memo = &local_memo;
    std::vector<std::map<TorusWeight, Integer>> chain(static_cast<std::size_t>(w));
    std::set<TorusWeight, std::greater<>> mus;
    for (int n = 1; n <= w; ++n) {
        for (const auto& [mu, d] : chain_block_dims(g, n, w))
            if (is_dominant(mu) && d != 0 &&
                (opts.only_blocks.empty() ||
                 std::find(opts.only_blocks.begin(), opts.only_blocks.end(), mu) != opts.only_blocks.end())) {
                chain[static_cast<std::size_t>(n - 1)][mu] = d;
                mus.insert(mu);
            }
        rep.degrees.push_back(homology_dims(g, n, w, o));
    }
    for (const auto& mu : mus) {
        EulerBlock b;
        b.mu = mu;
        for (int n = 1; n <= w; ++n) {
            const auto& cm = chain[static_cast<std::size_t>(n - 1)];
            const auto it = cm.find(mu);
            const Integer c = it == cm.end() ? Integer(0) : it->second;
            Integer h = 0;
            for (const auto& bh : rep.degrees[static_cast<std::size_t>(n - 1)].blocks)
                if (bh.mu == mu)
                    h = static_cast<unsigned long>(bh.homology);
            b.chain.push_back(c);
            b.homology.push_back(h);
            if (n % 2) {
                b.chi_chain -= c;
                b.chi_homology -= h;
            } else {
                b.chi_chain += c;
                b.chi_homology += h;
            }
        }
        rep.blocks.push_back(std::move(b));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace cgplus
