#pragma once

// Contraction and alternation on tensors of H, highest weight detection,
// the sp-action, raising-operator kernels and a Casimir projector.

#include "cgplus/chain_complex.hpp"
#include "cgplus/homology.hpp"
#include "cgplus/poly_core.hpp"
#include "cgplus/rep_theory.hpp"

#include <string>
#include <vector>

namespace cgplus {

/// mu(v_i, v_j) applied to Plain factors i and j (1-based among the Plain
/// factors; negative values count from the end, -1 is the last).
TensorElement contract(const TensorElement& t, int i, int j);

/// Antisymmetrizes the listed Plain factors into a new Wedge factor placed
/// after the existing Wedge factors; the other Plain factors keep order.
TensorElement alternate(const TensorElement& t, const std::vector<int>& positions);

struct PipelineStep {
    enum class Kind : std::uint8_t { Contract, Alternate };
    Kind kind = Kind::Contract;
    std::vector<int> positions;  // Contract: {i, j}

    static PipelineStep contr(int i, int j) { return {Kind::Contract, {i, j}}; }
    static PipelineStep alter(std::vector<int> pos) { return {Kind::Alternate, std::move(pos)}; }
    /// contr^{1,n} and alter^{1,n} on the current Plain factors.
    static PipelineStep contr_end() { return contr(1, -1); }
    static PipelineStep alter_end() { return alter({1, -1}); }
};

class OperatorPipeline {
public:
    OperatorPipeline() = default;
    explicit OperatorPipeline(std::vector<PipelineStep> steps) : steps_(std::move(steps)) {}

    /// contr_end applied `contractions` times, then alter_end `alternations` times.
    static OperatorPipeline detection(int contractions, int alternations);

    OperatorPipeline then(const OperatorPipeline& next) const;
    const std::vector<PipelineStep>& steps() const { return steps_; }
    TensorElement apply(const TensorElement& t) const;
    std::string str() const;

private:
    std::vector<PipelineStep> steps_;
};

/// The highest weight vector a_lambda: wedges a_1 ^ ... ^ a_{lambda'_j} for
/// columns of length >= 2, followed by a_1 in Plain factors.
TensorElement highest_weight_vector(const Partition& lambda);

/// Tensor image of a chain: a wedge f_1 ^ ... ^ f_n (weights descending) is
/// antisymmetrized within runs of equal weight and each f_i is embedded by iota.
TensorElement iota_chain(const ChainElement& x);

/// Coefficient of a_lambda in pipeline(iota(x)). The pipeline output shape
/// must equal the shape of a_lambda.
Rational detect_highest_weight(const ChainElement& x, const Partition& lambda, const OperatorPipeline& pipeline);

/// (rho!)^2 (k+2-rho)! (l+2-lambda_2-rho)! lambda_2!, doubled when k == l.
Integer detection_coefficient_closed_form(int k, int l, const Partition& lambda);

/// The element a_1^{k+2-rho} a_3^rho ^ a_1^{l+2-lambda_2-rho} a_2^lambda_2 b_3^rho.
ChainElement detection_test_element(int k, int l, const Partition& lambda, int g = 4);

// ---------------------------------------------------------------------------
// sp = S^2 H acting by the bracket

/// Diagonal action of q in S^2 H on a tensor (derivation on each factor).
TensorElement sp_act(const SymElement& q, const TensorElement& t, const SymplecticContext& ctx);
/// Action on a chain (derivation over the wedge factors).
ChainElement sp_act(const SymElement& q, const ChainElement& x);

/// Positive root vectors a_i a_j (i <= j) and a_i b_j (i < j).
std::vector<SymElement> positive_root_vectors(int g);

/// Basis of the joint kernel of all positive root vectors on a dominant
/// torus block of (Lambda^n c^+)_w (computed exactly).
std::vector<ChainElement> raising_kernel(int g, int n, int w, const TorusWeight& mu);
/// Dimension of that kernel, i.e. the multiplicity of V_mu.
std::size_t raising_multiplicity(int g, int n, int w, const TorusWeight& mu, const RankPolicy& policy = {});

/// Casimir element sum_{ij} (B^{-1})_{ij} ad(X_i) ad(X_j), scaled so that it
/// acts on V_lambda by (lambda, lambda + 2 rho).
class Casimir {
public:
    explicit Casimir(int g);
    ChainElement apply(const ChainElement& x) const;
    Rational eigenvalue(const Partition& lambda) const;

    /// Projection onto the lambda-isotypic part, using the list of
    /// components of the ambient module.
    ChainElement project(const ChainElement& x, const Partition& lambda, const Decomposition& ambient) const;

private:
    int g_;
    std::vector<SymElement> basis_;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> dual_;  // dual basis in terms of basis_
    Rational scale_ = 1;
};

}  // namespace cgplus
