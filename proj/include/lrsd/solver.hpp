#pragma once

#include "lrsd/matrix.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lrsd {

/// Tuning parameters for the low-rank + sparse decomposition
///   min_{X,E} ½‖D − X − E‖_F² + α‖X‖_* + β‖E‖_1.
struct SolverConfig {
    double alpha = 1.0;
    double beta = 1.0;
    int max_iterations = 500;
    double rel_tolerance = 1e-10;

    void validate() const;
};

struct SolverResult {
    DenseMatrix x_hat;
    DenseMatrix e_hat;
    /// Objective at the starting point followed by one value per iteration.
    std::vector<double> objective_trace;
    int iterations_used = 0;
    bool converged = false;
    Index rank_of_x = 0;
    Index nnz_of_e = 0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Starting point for `solve`. Alternation updates X first, so only `e`
/// influences the iterates; `x` enters the initial objective value.
struct WarmStart {
    DenseMatrix x;
    DenseMatrix e;
};

enum class SvtMethod {
    automatic,
    direct,
    gram,
};

double objective(const DenseMatrix& d, const DenseMatrix& x, const DenseMatrix& e, double alpha, double beta);

/// Singular value thresholding Σ (σᵢ − λ)₊ uᵢvᵢᵀ, the proximal map of λ‖·‖_*.
/// The Gram route eigendecomposes the small side of MᵀM (or MMᵀ); automatic
/// picks it for strongly rectangular inputs.
DenseMatrix svt(const DenseMatrix& m, double lambda, SvtMethod method = SvtMethod::automatic);
Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double lambda, SvtMethod method = SvtMethod::automatic,
                    Eigen::VectorXd* shrunk_values = nullptr);

/// Entrywise sign(m)·(|m| − β)₊, the proximal map of β‖·‖_1.
DenseMatrix soft_threshold(const DenseMatrix& m, double beta);

/// 1.48 · median |D − median(D)|.
double estimate_sigma(const DenseMatrix& d);

struct Penalties {
    double alpha;
    double beta;
};

/// α = (√n + √p)σ and β = beta_scale·α/√max(n, p).
Penalties default_params(Index n, Index p, double sigma, double beta_scale = 2.0);

/// Parameters the caller may leave unset; unset values are derived from σ̂.
struct ParameterRequest {
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> threshold;
    double beta_scale = 2.0;
    double threshold_scale = 0.25;
};

struct ResolvedParameters {
    double sigma_hat = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double threshold = 0.0;
    bool alpha_auto = false;
    bool beta_auto = false;
    bool threshold_auto = false;
    double beta_scale = 2.0;
    double threshold_scale = 0.25;

    std::string alpha_rule() const;
    std::string beta_rule() const;
    std::string threshold_rule() const;
};

ResolvedParameters resolve_parameters(const DenseMatrix& d, const ParameterRequest& request);

SolverResult solve(const DenseMatrix& d, const SolverConfig& config);
SolverResult solve(const DenseMatrix& d, const SolverConfig& config, const WarmStart& start);

/// Violation of the first-order optimality conditions of (X, E); zero iff
/// the pair minimizes the objective. With R = D − X − E and X = UΣVᵀ the
/// conditions are UᵀRV = αI, (I−UUᵀ)RV = 0, UᵀR(I−VVᵀ) = 0,
/// ‖(I−UUᵀ)R(I−VVᵀ)‖₂ ≤ α, and Rᵢⱼ = β·sign(Eᵢⱼ) or |Rᵢⱼ| ≤ β where Eᵢⱼ = 0.
/// Returns the largest violation in absolute units.
double optimality_residual(const DenseMatrix& d, const DenseMatrix& x, const DenseMatrix& e, double alpha,
                           double beta);

/// Entry (i, j) is reported when |X̂ᵢⱼ| > T or |Êᵢⱼ| > T.
Mask detect(const SolverResult& result, double threshold);
Mask detect(const DenseMatrix& x_hat, const DenseMatrix& e_hat, double threshold);

void write_trace(const std::filesystem::path& path, const std::vector<double>& trace);

}  // namespace lrsd
