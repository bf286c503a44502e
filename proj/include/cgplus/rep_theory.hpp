#pragma once

// Partitions, Sp(2g) characters, Littlewood-Richardson products and
// GL -> Sp branching, and the decompositions of c(k) (x) c(l) and
// Lambda^2 c(k).

#include "cgplus/errors.hpp"
#include "cgplus/poly_core.hpp"
#include "cgplus/rational.hpp"

#include <json.hpp>

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace cgplus {

/// Weakly decreasing positive parts; the empty partition is written [0].
class Partition {
public:
    Partition() = default;
    /// Trailing zeros are dropped; throws if the parts increase or are negative.
    explicit Partition(std::vector<int> parts);
    /// Accepts "[52]", "52", "[10,2]", "5,2" and "[0]".
    static Partition parse(const std::string& s);

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int size() const;
    int operator[](int i) const { return i < length() ? parts_[static_cast<std::size_t>(i)] : 0; }
    Partition transpose() const;
    bool contains(const Partition& mu) const;

    /// The partition padded with zeros to length g (a dominant weight).
    TorusWeight as_weight(int g) const;

    std::string str() const;

    auto operator<=>(const Partition&) const = default;

private:
    std::vector<int> parts_;
};

/// All partitions of n with at most max_len parts and parts <= max_part.
std::vector<Partition> partitions_of(int n, int max_len = 1 << 20, int max_part = 1 << 20);

/// Larger diagrams first, then lexicographically descending.
struct DiagramOrder {
    bool operator()(const Partition& a, const Partition& b) const
    {
        return a.size() != b.size() ? a.size() > b.size() : a > b;
    }
};

/// Multiset of Sp-irreducibles.
class Decomposition {
public:
    void add(const Partition& p, long multiplicity = 1);
    const std::map<Partition, long, DiagramOrder>& terms() const { return terms_; }
    long multiplicity(const Partition& p) const;
    std::size_t distinct() const { return terms_.size(); }
    long count() const;
    bool multiplicity_free() const;
    Integer total_dim(int g) const;

    /// Parses "[51] + [33] + 2[311]".
    static Decomposition parse(const std::string& s);
    std::string str() const;
    nlohmann::json to_json(int g) const;

    bool operator==(const Decomposition&) const = default;

private:
    std::map<Partition, long, DiagramOrder> terms_;
};

// ---------------------------------------------------------------------------
// Sp(2g) characters

/// Weyl dimension formula. Throws if length(lambda) > g.
Integer sp_dim(const Partition& lambda, int g);

/// lambda - mu lies in the positive root cone (both dominant, length g).
bool dominates(const TorusWeight& lambda, const TorusWeight& mu);

/// Multiplicities of the dominant weights of V_lambda (Freudenthal).
std::map<TorusWeight, Integer> sp_dominant_multiplicities(const Partition& lambda, int g);

/// Full weight diagram of V_lambda (Freudenthal, expanded over Weyl orbits).
std::map<TorusWeight, Integer> sp_weight_multiplicities(const Partition& lambda, int g);

/// Same diagram by counting King symplectic tableaux; used as an oracle.
std::map<TorusWeight, Integer> sp_weight_multiplicities_tableaux(const Partition& lambda, int g);

// ---------------------------------------------------------------------------
// Brute-force characters of modules built from H

using WeightDiagram = std::map<TorusWeight, Integer>;

/// Torus character of S^n H by enumerating monomials.
WeightDiagram sym_power_diagram(int n, int g);
WeightDiagram tensor_diagram(const WeightDiagram& x, const WeightDiagram& y);
/// Lambda^m of a module given by its character, as a multiset of weights.
WeightDiagram exterior_power_diagram(const WeightDiagram& x, int m);

/// Peels irreducibles off the dominant entries, lexicographically largest
/// first. Non-dominant entries, if present, must match their dominant
/// representative. Negative residue throws InconsistentData.
Decomposition decompose_from_weight_dims(const std::map<TorusWeight, Integer>& dims, int g);

// ---------------------------------------------------------------------------
// GL combinatorics

Integer lr_coefficient(const Partition& lambda, const Partition& mu, const Partition& nu);
std::map<Partition, Integer> lr_product(const Partition& mu, const Partition& nu);

/// Littlewood's restriction GL(2g) -> Sp(2g): sum over delta with even
/// column lengths of c^lambda_{delta mu} [mu]. Requires length(lambda) <= g.
Decomposition branch_gl_to_sp(const Partition& lambda, int g);

/// e_2 o h_n expanded in Schur functions, computed symbolically from the
/// polynomial in three variables.
std::map<Partition, Integer> plethysm_e2_h(int n);
/// The closed form sum over odd j <= n of s_{(2n-j, j)}.
std::map<Partition, Integer> plethysm_e2_h_formula(int n);

// ---------------------------------------------------------------------------
// The c(k) (x) c(l) and Lambda^2 c(k) families

struct RhoData {
    int k = 0, l = 0;
    Partition lambda;
    /// 2*rho = k + l + 4 - |lambda|; only meaningful when rho_valid().
    int twice_rho = 0;

    RhoData(int k, int l, Partition lambda);
    bool rho_valid() const { return twice_rho >= 0 && twice_rho % 2 == 0; }
    int rho() const { return twice_rho / 2; }
    /// l+2 >= rho+lambda_2 and k+2 <= rho+lambda_1.
    bool tensor_condition() const;
    /// rho+lambda_2 odd and rho+lambda_2 <= k+2 <= rho+lambda_1 (needs k == l).
    bool wedge_condition() const;
};

/// c(k) (x) c(l), k > l >= 1, from the closed-form list; dimension asserted.
Decomposition decompose_tensor_cg(int k, int l, int g);
/// Same via Pieri (h_{k+2} h_{l+2}) and Littlewood branching.
Decomposition decompose_tensor_cg_lr(int k, int l, int g);
/// Lambda^2 c(k) from the closed-form list; dimension asserted.
Decomposition decompose_wedge_cg(int k, int g);
/// Same via the symbolic plethysm and Littlewood branching.
Decomposition decompose_wedge_cg_plethysm(int k, int g);
/// Lambda^3 c(1) by peeling its brute-force weight diagram. Needs g >= 3.
Decomposition decompose_lambda3_c1(int g);

}  // namespace cgplus
