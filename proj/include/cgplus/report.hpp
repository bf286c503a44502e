#pragma once

// Machine-readable records for homology runs and the per-block Euler
// characteristic cross-check.

#include "cgplus/homology.hpp"
#include "cgplus/rep_theory.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cgplus {

nlohmann::json to_json(const RankCertificate& c);

/// Sp-decomposition of a homology result from its dominant block
/// dimensions. Requires a dominant-blocks run over every nonzero block.
Decomposition homology_decomposition(const HomologyResult& r);

/// `timings` false drops wall-clock and cache-hit fields so that reruns
/// produce identical output.
nlohmann::json homology_json(const HomologyResult& r, bool timings = true, bool decompose = true);
std::string homology_csv(const HomologyResult& r, bool timings = true);

struct EulerBlock {
    TorusWeight mu;
    std::vector<Integer> chain;     // dim (Lambda^n)_w on the block, n = 1..w
    std::vector<Integer> homology;  // dim H_n on the block, n = 1..w
    Integer chi_chain = 0, chi_homology = 0;
    bool pass() const { return chi_chain == chi_homology; }
};

struct EulerReport {
    int g = 0, w = 0;
    std::vector<EulerBlock> blocks;
    std::vector<HomologyResult> degrees;  // one homology run per n = 1..w
    double seconds = 0;
    bool certified() const;
    bool pass() const;
    nlohmann::json to_json(bool timings = true) const;
};

/// Runs homology in every degree 1..w (dominant blocks) and compares the
/// alternating sums block by block. Degrees above w vanish.
EulerReport euler_check(int g, int w, const HomologyOptions& opts = {});

}  // namespace cgplus
