#include "cgplus/homology.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <json.hpp>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace cgplus {

namespace fs = std::filesystem;

std::string to_string(RankMode m)
{
    switch (m) {
    case RankMode::Exact: return "exact";
    case RankMode::Modular: return "modular";
    case RankMode::Auto: return "auto";
    }
    return "?";
}

RankMode parse_rank_mode(const std::string& s)
{
    if (s == "exact")
        return RankMode::Exact;
    if (s == "modular")
        return RankMode::Modular;
    if (s == "auto")
        return RankMode::Auto;
    throw InvalidArgument("unknown rank mode '" + s + "' (expected exact, modular or auto)");
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string policy_key(const RankPolicy& p)
{
    std::ostringstream os;
    os << to_string(p.mode);
    if (p.mode == RankMode::Auto)
        os << ":" << p.exact_threshold;
    if (p.mode != RankMode::Exact)
        for (auto q : p.primes)
            os << ":" << q;
    return os.str();
}

std::string block_key(const MatrixHeader& h)
{
    std::ostringstream key;
    key << "v" << kTripletFormatVersion << ":g" << h.g << ":n" << h.n << ":w" << h.w << ":" << h.block;
    return key.str();
}

RankMethod parse_rank_method(const std::string& s)
{
    for (auto m : {RankMethod::ExactRational, RankMethod::FractionFreeInteger, RankMethod::Modular})
        if (to_string(m) == s)
            return m;
    throw FormatError("unknown rank method '" + s + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// MatrixCache

MatrixCache::MatrixCache(fs::path root) : root_(std::move(root)) {}

fs::path default_cache_root()
{
    if (const char* env = std::getenv("CGPLUS_CACHE"); env && *env)
        return env;
    return "cache";
}

fs::path MatrixCache::path_for(const MatrixHeader& h) const
{
    std::ostringstream name;
    name << "d" << h.n << "-g" << h.g << "-w" << h.w << "-" << std::hex << std::setw(16) << std::setfill('0')
         << fnv1a(block_key(h)) << ".trip";
    return root_ / name.str();
}

std::optional<SparseMatrix> MatrixCache::load(const MatrixHeader& h) const
{
    const fs::path p = path_for(h);
    if (!fs::exists(p))
        return std::nullopt;
    MatrixHeader got;
    SparseMatrix m = load_triplets(p, &got);
    if (got.g != h.g || got.n != h.n || got.w != h.w || got.block != h.block)
        throw FormatError(p.string() + ": header does not match its cache key; clear the cache");
    return m;
}

void MatrixCache::store(const MatrixHeader& h, const SparseMatrix& m) const
{
    fs::create_directories(root_);
    save_triplets(path_for(h), m, h);
}

namespace {

fs::path rank_path(const fs::path& root, const MatrixHeader& h, const RankPolicy& policy)
{
    std::ostringstream name;
    name << "d" << h.n << "-g" << h.g << "-w" << h.w << "-" << std::hex << std::setw(16) << std::setfill('0')
         << fnv1a(block_key(h) + "|" + policy_key(policy)) << ".rank";
    return root / name.str();
}

}  // namespace

std::optional<RankRecord> MatrixCache::load_rank(const MatrixHeader& h, const RankPolicy& policy) const
{
    const fs::path p = rank_path(root_, h, policy);
    if (!fs::exists(p))
        return std::nullopt;
    std::ifstream is(p);
    RankRecord r;
    try {
        const nlohmann::json j = nlohmann::json::parse(is);
        if (j.at("schema") != "cgplus-rank/1" || j.at("key") != block_key(h) || j.at("policy") != policy_key(policy))
            throw FormatError("record does not match its cache key; clear the cache");
        r.rows = j.at("rows");
        r.cols = j.at("cols");
        r.outcome.cross_checked = j.at("cross_checked");
        RankCertificate& c = r.outcome.cert;
        c.rank = j.at("rank");
        c.method = parse_rank_method(j.at("method"));
        c.primes = j.at("primes").get<std::vector<std::uint64_t>>();
        c.prime_ranks = j.at("prime_ranks").get<std::vector<std::size_t>>();
        c.agreement = j.at("agreement");
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(p.string() + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(p.string() + ": " + e.what());
    }
    return r;
}

void MatrixCache::store_rank(const MatrixHeader& h, const RankPolicy& policy, const RankRecord& r) const
{
    fs::create_directories(root_);
    const RankCertificate& c = r.outcome.cert;
    const nlohmann::json j{{"schema", "cgplus-rank/1"},
                           {"key", block_key(h)},
                           {"policy", policy_key(policy)},
                           {"rows", r.rows},
                           {"cols", r.cols},
                           {"rank", c.rank},
                           {"method", to_string(c.method)},
                           {"primes", c.primes},
                           {"prime_ranks", c.prime_ranks},
                           {"agreement", c.agreement},
                           {"cross_checked", r.outcome.cross_checked}};
    const fs::path p = rank_path(root_, h, policy);
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream os(tmp);
        os << j.dump(1) << "\n";
        if (!os)
            throw ResourceError("cannot write " + tmp.string());
    }
    fs::rename(tmp, p);
}

std::optional<RankRecord> RankMemo::find(const MatrixHeader& h, const RankPolicy& policy) const
{
    std::lock_guard lock(mu_);
    const auto it = ranks_.find(block_key(h) + "|" + policy_key(policy));
    if (it == ranks_.end())
        return std::nullopt;
    return it->second;
}

void RankMemo::put(const MatrixHeader& h, const RankPolicy& policy, const RankRecord& r)
{
    std::lock_guard lock(mu_);
    ranks_[block_key(h) + "|" + policy_key(policy)] = r;
}

std::vector<MatrixCache::Entry> MatrixCache::list() const
{
    std::vector<Entry> out;
    if (!fs::exists(root_))
        return out;
    for (const auto& de : fs::directory_iterator(root_)) {
        if (!de.is_regular_file() || de.path().extension() != ".trip")
            continue;
        Entry e;
        e.path = de.path();
        e.bytes = de.file_size();
        std::ifstream is(de.path());
        std::string magic, tag;
        int version = 0;
        is >> magic >> version;
        e.header.version = version;
        is >> tag >> e.header.g >> tag >> e.header.n >> tag >> e.header.w >> tag >> e.header.block;
        is >> tag >> e.rows >> tag >> e.cols >> tag >> tag >> tag >> tag >> tag >> e.nnz;
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.path < b.path; });
    return out;
}

std::size_t MatrixCache::clear() const
{
    std::size_t removed = 0;
    if (!fs::exists(root_))
        return 0;
    for (const auto& de : fs::directory_iterator(root_))
        if (de.is_regular_file() && (de.path().extension() == ".trip" || de.path().extension() == ".rank")) {
            fs::remove(de.path());
            ++removed;
        }
    return removed;
}

// ---------------------------------------------------------------------------
// Ranks

RankOutcome compute_rank(const SparseMatrix& m, const RankPolicy& policy, std::size_t rank_cap)
{
    EliminationOptions opts = policy.elimination;
    opts.rank_cap = std::min(opts.rank_cap, rank_cap);
    RankOutcome out;
    switch (policy.mode) {
    case RankMode::Exact:
        out.cert = rank_exact(m, opts);
        break;
    case RankMode::Modular:
        out.cert = rank_modular(m, policy.primes, opts);
        break;
    case RankMode::Auto:
        if (m.cols() < policy.exact_threshold) {
            out.cert = rank_exact(m, opts);
            const RankCertificate mod = rank_modular(m, policy.primes, opts);
            if (mod.rank != out.cert.rank)
                throw InconsistentData("exact rank " + std::to_string(out.cert.rank) + " and modular rank " +
                                       std::to_string(mod.rank) + " disagree");
            out.cross_checked = true;
        } else {
            out.cert = rank_modular(m, policy.primes, opts);
        }
        break;
    }
    return out;
}

SparseMatrix block_differential(int g, int n, int w, const TorusWeight& mu, const MatrixCache* cache,
                                bool* cache_hit, unsigned jobs)
{
    MatrixHeader h;
    h.g = g;
    h.n = n;
    h.w = w;
    h.block = weight_str(mu);
    if (cache_hit)
        *cache_hit = false;
    if (cache) {
        if (auto m = cache->load(h)) {
            if (cache_hit)
                *cache_hit = true;
            return std::move(*m);
        }
    }
    const ChainBasis src = ChainBasis::build(g, n, w, mu);
    const ChainBasis dst = ChainBasis::build(g, n - 1, w, mu);
    SparseMatrix m = ce_differential(src, dst, jobs);
    if (cache)
        cache->store(h, m);
    return m;
}

BlockRank block_differential_rank(int g, int n, int w, const TorusWeight& mu, const RankPolicy& policy,
                                  const MatrixCache* cache, unsigned jobs, std::size_t rank_cap, RankMemo* memo)
{
    BlockRank br;
    MatrixHeader h;
    h.g = g;
    h.n = n;
    h.w = w;
    h.block = weight_str(mu);
    std::optional<RankRecord> known = memo ? memo->find(h, policy) : std::nullopt;
    if (!known && cache)
        known = cache->load_rank(h, policy);
    if (known) {
        br.rows = known->rows;
        br.cols = known->cols;
        br.outcome = known->outcome;
        br.rank = br.outcome.cert.rank;
        br.cache_hit = true;
        if (memo)
            memo->put(h, policy, *known);
        return br;
    }
    auto t0 = std::chrono::steady_clock::now();
    SparseMatrix m = block_differential(g, n, w, mu, cache, &br.cache_hit, jobs);
    br.build_seconds = seconds_since(t0);
    br.rows = m.rows();
    br.cols = m.cols();
    t0 = std::chrono::steady_clock::now();
    br.outcome = compute_rank(m, policy, rank_cap);
    br.rank_seconds = seconds_since(t0);
    br.rank = br.outcome.cert.rank;
    const RankRecord rec{br.rows, br.cols, br.outcome};
    if (memo)
        memo->put(h, policy, rec);
    if (cache)
        cache->store_rank(h, policy, rec);
    return br;
}

// ---------------------------------------------------------------------------
// Homology

std::map<TorusWeight, Integer> HomologyResult::weight_dims() const
{
    std::map<TorusWeight, Integer> out;
    for (const auto& b : blocks) {
        if (b.homology == 0)
            continue;
        if (all_blocks) {
            out[b.mu] += static_cast<unsigned long>(b.homology);
        } else {
            for (const auto& t : weyl_orbit(b.mu))
                out[t] += static_cast<unsigned long>(b.homology);
        }
    }
    return out;
}

HomologyResult homology_dims(int g, int n, int w, const HomologyOptions& opts)
{
    SymplecticContext ctx(g);
    if (n < 1 || w < 1)
        throw InvalidArgument("homology needs n >= 1 and w >= 1");
    const auto t_start = std::chrono::steady_clock::now();
    HomologyResult res;
    res.g = g;
    res.n = n;
    res.w = w;
    res.all_blocks = opts.all_blocks;

    const auto dims = chain_block_dims(g, n, w);
    std::vector<TorusWeight> todo;
    for (const auto& [mu, d] : dims) {
        if (!opts.all_blocks && !is_dominant(mu))
            continue;
        if (!opts.only_blocks.empty() &&
            std::find(opts.only_blocks.begin(), opts.only_blocks.end(), mu) == opts.only_blocks.end())
            continue;
        todo.push_back(mu);
    }
    std::sort(todo.begin(), todo.end(), std::greater<>());

    res.blocks.resize(todo.size());
    std::atomic<std::size_t> next{0};
    std::mutex report_mu;
    std::vector<std::exception_ptr> errors(todo.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(todo.size())));
    const unsigned inner_jobs = workers == 1 ? std::max(1u, opts.jobs) : 1u;

    auto run_block = [&](std::size_t i) {
        BlockHomology& b = res.blocks[i];
        b.mu = todo[i];
        b.orbit = opts.all_blocks ? 1 : weyl_orbit_size(b.mu);
        b.chain_dim = dims.at(b.mu).get_ui();
        if (n >= 2) {
            BlockRank r = block_differential_rank(g, n, w, b.mu, opts.policy, opts.cache, inner_jobs,
                                                    std::numeric_limits<std::size_t>::max(), opts.memo);
            if (r.cols != b.chain_dim)
                throw InconsistentData("block " + weight_str(b.mu) + ": basis size " + std::to_string(r.cols) +
                                       " disagrees with the counted dimension " + std::to_string(b.chain_dim));
            b.rank_in = r.rank;
            b.in = r.outcome;
            b.cache_hit_in = r.cache_hit;
            b.build_seconds += r.build_seconds;
            b.rank_seconds += r.rank_seconds;
        }
        const std::size_t kernel = b.chain_dim - b.rank_in;
        if (n + 1 <= w && kernel > 0) {
            BlockRank r = block_differential_rank(g, n + 1, w, b.mu, opts.policy, opts.cache, inner_jobs, kernel,
                                                    opts.memo);
            if (r.rows != b.chain_dim)
                throw InconsistentData("block " + weight_str(b.mu) + ": target size mismatch");
            b.rank_out = r.rank;
            b.out = r.outcome;
            b.cache_hit_out = r.cache_hit;
            b.build_seconds += r.build_seconds;
            b.rank_seconds += r.rank_seconds;
        }
        if (b.rank_out > kernel)
            throw InconsistentData("block " + weight_str(b.mu) + ": rank of d_{n+1} exceeds dim ker d_n");
        b.homology = kernel - b.rank_out;
        if (opts.on_block) {
            std::lock_guard lock(report_mu);
            opts.on_block(b);
        }
    };
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < todo.size();) {
            try {
                run_block(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const ResourceError& e) {
                throw ResourceError("block " + weight_str(todo[i]) + " (g=" + std::to_string(g) + " n=" +
                                    std::to_string(n) + " w=" + std::to_string(w) + "): " + e.what());
            }
        }

    for (const auto& b : res.blocks) {
        res.total += Integer(static_cast<unsigned long>(b.homology)) * static_cast<unsigned long>(b.orbit);
        for (const auto* o : {&b.in, &b.out})
            if (*o && (*o)->cert.method == RankMethod::Modular) {
                res.any_modular = true;
                if (!(*o)->cert.agreement)
                    res.certified = false;
            }
    }
    res.seconds = seconds_since(t_start);
    return res;
}

}  // namespace cgplus
