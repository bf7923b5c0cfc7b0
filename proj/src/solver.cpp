#include "lrsd/solver.hpp"

#include "lrsd/error.hpp"
#include "lrsd/numerics.hpp"
#include "lrsd/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lrsd {

namespace {

// Gram route pays off once one side dominates.
constexpr Index gram_min_long_side = 2048;
constexpr Index gram_min_aspect = 8;

bool prefer_gram(const Eigen::MatrixXd& m)
{
    const Index lo = std::min(m.rows(), m.cols());
    const Index hi = std::max(m.rows(), m.cols());
    return lo > 0 && hi >= gram_min_long_side && hi >= gram_min_aspect * lo;
}

// SVT for a tall matrix (rows >= cols) through the eigendecomposition of MᵀM:
// X = M·V·diag((σ − λ)₊/σ)·Vᵀ, so the left vectors are never formed.
Eigen::MatrixXd svt_gram_tall(const Eigen::MatrixXd& m, double lambda, Eigen::VectorXd& shrunk)
{
    const Index p = m.cols();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram.selfadjointView<Eigen::Lower>());

    // eigenvalues come ascending; report singular values descending
    const Eigen::VectorXd sigma = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
    const Eigen::MatrixXd vecs = eig.eigenvectors().rowwise().reverse();

    shrunk = (sigma.array() - lambda).cwiseMax(0.0).matrix();
    const Index k = static_cast<Index>((shrunk.array() > 0.0).count());
    if (k == 0) {
        return Eigen::MatrixXd::Zero(m.rows(), p);
    }
    const Eigen::VectorXd weights = shrunk.head(k).cwiseQuotient(sigma.head(k));
    const Eigen::MatrixXd vk = vecs.leftCols(k);
    return (m * vk) * weights.asDiagonal() * vk.transpose();
}

Eigen::MatrixXd svt_direct(const Eigen::MatrixXd& m, double lambda, Eigen::VectorXd& shrunk)
{
    const SvdFactors f = svd(m);
    shrunk = (f.singular_values.array() - lambda).cwiseMax(0.0).matrix();
    const Index k = static_cast<Index>((shrunk.array() > 0.0).count());
    if (k == 0) {
        return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    }
    return f.u.leftCols(k) * shrunk.head(k).asDiagonal() * f.v.leftCols(k).transpose();
}

double spectral_norm(const Eigen::MatrixXd& w)
{
    if (w.size() == 0) {
        return 0.0;
    }
    if (std::max(w.rows(), w.cols()) >= gram_min_long_side) {
        const Eigen::MatrixXd g = w.rows() >= w.cols() ? Eigen::MatrixXd(w.transpose() * w)
                                                       : Eigen::MatrixXd(w * w.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
    }
    return singular_values(w)(0);
}

Index count_rank(const Eigen::VectorXd& sigma)
{
    if (sigma.size() == 0) {
        return 0;
    }
    const double top = sigma.maxCoeff();
    if (top <= 0.0) {
        return 0;
    }
    return static_cast<Index>((sigma.array() > 1e-9 * top).count());
}

void require_non_negative(double v, const char* name)
{
    if (!(v >= 0.0) || !std::isfinite(v)) {
        fail(Errc::invalid_argument, std::string(name) + " must be a finite non-negative number");
    }
}

std::string fmt(double v)
{
    return tsv::format_double(v);
}

}  // namespace

void SolverConfig::validate() const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        fail(Errc::invalid_argument, "alpha must be positive");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        fail(Errc::invalid_argument, "beta must be positive");
    }
    if (max_iterations < 1) {
        fail(Errc::invalid_argument, "max_iterations must be at least 1");
    }
    if (!(rel_tolerance > 0.0)) {
        fail(Errc::invalid_argument, "rel_tolerance must be positive");
    }
}

double objective(const DenseMatrix& d, const DenseMatrix& x, const DenseMatrix& e, double alpha, double beta)
{
    require_same_shape(d, x, "objective");
    require_same_shape(d, e, "objective");
    const double fit = 0.5 * (d.values() - x.values() - e.values()).squaredNorm();
    return fit + alpha * nuclear_norm(x.values()) + beta * e.values().lpNorm<1>();
}

Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double lambda, SvtMethod method, Eigen::VectorXd* shrunk_values)
{
    require_non_negative(lambda, "svt lambda");
    if (method == SvtMethod::automatic) {
        method = prefer_gram(m) ? SvtMethod::gram : SvtMethod::direct;
    }
    Eigen::VectorXd shrunk;
    Eigen::MatrixXd out;
    if (m.size() == 0) {
        out = m;
    } else if (method == SvtMethod::direct) {
        out = svt_direct(m, lambda, shrunk);
    } else if (m.rows() >= m.cols()) {
        out = svt_gram_tall(m, lambda, shrunk);
    } else {
        out = svt_gram_tall(m.transpose(), lambda, shrunk).transpose();
    }
    if (shrunk_values) {
        *shrunk_values = std::move(shrunk);
    }
    return out;
}

DenseMatrix svt(const DenseMatrix& m, double lambda, SvtMethod method)
{
    return DenseMatrix(svt(m.values(), lambda, method), m.row_labels(), m.col_labels());
}

DenseMatrix soft_threshold(const DenseMatrix& m, double beta)
{
    require_non_negative(beta, "soft_threshold beta");
    const auto& v = m.values().array();
    Eigen::MatrixXd out = (v.sign() * (v.abs() - beta).cwiseMax(0.0)).matrix();
    return DenseMatrix(std::move(out), m.row_labels(), m.col_labels());
}

double estimate_sigma(const DenseMatrix& d)
{
    const double center = median_all(d);
    const auto& v = d.values();
    std::vector<double> deviations(static_cast<std::size_t>(v.size()));
    for (Index k = 0; k < v.size(); ++k) {
        deviations[static_cast<std::size_t>(k)] = std::abs(v.data()[k] - center);
    }
    return 1.48 * median(std::move(deviations));
}

Penalties default_params(Index n, Index p, double sigma, double beta_scale)
{
    if (n < 1 || p < 1) {
        fail(Errc::invalid_argument, "default_params requires n >= 1 and p >= 1");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        fail(Errc::degenerate, "noise scale estimate sigma_hat = " + fmt(sigma) +
                                   "; supply alpha and beta explicitly for constant or degenerate input");
    }
    if (!(beta_scale > 0.0)) {
        fail(Errc::invalid_argument, "beta_scale must be positive");
    }
    const double alpha = (std::sqrt(static_cast<double>(n)) + std::sqrt(static_cast<double>(p))) * sigma;
    const double beta = beta_scale * alpha / std::sqrt(static_cast<double>(std::max(n, p)));
    return {alpha, beta};
}

std::string ResolvedParameters::alpha_rule() const
{
    return alpha_auto ? "(sqrt(n)+sqrt(p))*sigma_hat" : "user";
}

std::string ResolvedParameters::beta_rule() const
{
    return beta_auto ? fmt(beta_scale) + "*alpha/sqrt(max(n,p))" : "user";
}

std::string ResolvedParameters::threshold_rule() const
{
    if (!threshold_auto) return "user";
    return std::isfinite(threshold) ? fmt(threshold_scale) + "*sigma_hat" : "unresolved (sigma_hat=0)";
}

ResolvedParameters resolve_parameters(const DenseMatrix& d, const ParameterRequest& request)
{
    if (d.empty()) {
        fail(Errc::degenerate, "cannot resolve parameters for an empty matrix");
    }
    ResolvedParameters out;
    out.beta_scale = request.beta_scale;
    out.threshold_scale = request.threshold_scale;
    out.sigma_hat = estimate_sigma(d);

    out.alpha_auto = !request.alpha.has_value();
    out.beta_auto = !request.beta.has_value();
    out.threshold_auto = !request.threshold.has_value();

    if (out.alpha_auto || out.beta_auto) {
        if (out.alpha_auto) {
            out.alpha = default_params(d.rows(), d.cols(), out.sigma_hat, request.beta_scale).alpha;
        } else {
            out.alpha = *request.alpha;
        }
        if (out.beta_auto) {
            if (!(out.alpha > 0.0)) {
                fail(Errc::invalid_argument, "alpha must be positive");
            }
            out.beta = request.beta_scale * out.alpha /
                       std::sqrt(static_cast<double>(std::max(d.rows(), d.cols())));
        } else {
            out.beta = *request.beta;
        }
    } else {
        out.alpha = *request.alpha;
        out.beta = *request.beta;
    }

    if (out.threshold_auto) {
        // Left unresolved rather than failing: explicit alpha/beta still allow
        // a decomposition, and detect() rejects the NaN if it is ever used.
        out.threshold = out.sigma_hat > 0.0 ? request.threshold_scale * out.sigma_hat
                                            : std::numeric_limits<double>::quiet_NaN();
    } else {
        out.threshold = *request.threshold;
        require_non_negative(out.threshold, "threshold");
    }
    return out;
}

SolverResult solve(const DenseMatrix& d, const SolverConfig& config)
{
    const DenseMatrix zero = DenseMatrix::zeros_like(d);
    return solve(d, config, WarmStart{zero, zero});
}

SolverResult solve(const DenseMatrix& d, const SolverConfig& config, const WarmStart& start)
{
    config.validate();
    require_same_shape(d, start.x, "solve warm start");
    require_same_shape(d, start.e, "solve warm start");

    const Eigen::MatrixXd& dv = d.values();
    const double alpha = config.alpha;
    const double beta = config.beta;

    Eigen::MatrixXd x = start.x.values();
    Eigen::MatrixXd e = start.e.values();
    Eigen::MatrixXd work(dv.rows(), dv.cols());
    Eigen::VectorXd shrunk;

    SolverResult result;
    result.alpha = alpha;
    result.beta = beta;

    double previous = 0.5 * (dv - x - e).squaredNorm() + beta * e.lpNorm<1>();
    if (!x.isZero(0.0)) {
        previous += alpha * nuclear_norm(x);
    }
    result.objective_trace.push_back(previous);

    for (int it = 1; it <= config.max_iterations; ++it) {
        work = dv - e;
        x = svt(work, alpha, SvtMethod::automatic, &shrunk);
        work = dv - x;
        e = (work.array().sign() * (work.array().abs() - beta).cwiseMax(0.0)).matrix();
        work -= e;

        const double current = 0.5 * work.squaredNorm() + alpha * shrunk.sum() + beta * e.lpNorm<1>();
        result.objective_trace.push_back(current);
        result.iterations_used = it;

        const double decrease = (previous - current) / std::max(previous, 1.0);
        previous = current;
        if (decrease < config.rel_tolerance) {
            result.converged = true;
            break;
        }
    }

    result.rank_of_x = count_rank(shrunk);
    result.nnz_of_e = static_cast<Index>((e.array() != 0.0).count());
    result.x_hat = DenseMatrix(std::move(x), d.row_labels(), d.col_labels());
    result.e_hat = DenseMatrix(std::move(e), d.row_labels(), d.col_labels());
    return result;
}

double optimality_residual(const DenseMatrix& d, const DenseMatrix& x, const DenseMatrix& e, double alpha,
                           double beta)
{
    require_same_shape(d, x, "optimality_residual");
    require_same_shape(d, e, "optimality_residual");
    const Eigen::MatrixXd r = d.values() - x.values() - e.values();

    double worst = 0.0;

    const SvdFactors f = svd(x.values());
    const Index k = f.rank();
    if (k == 0) {
        worst = std::max(worst, spectral_norm(r) - alpha);
    } else {
        const Eigen::MatrixXd u = f.u.leftCols(k);
        const Eigen::MatrixXd v = f.v.leftCols(k);
        const Eigen::MatrixXd rv = r * v;
        const Eigen::MatrixXd utr = u.transpose() * r;
        const Eigen::MatrixXd core = u.transpose() * rv;

        worst = std::max(worst, (core - alpha * Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff());
        worst = std::max(worst, (rv - u * core).cwiseAbs().maxCoeff());
        worst = std::max(worst, (utr - core * v.transpose()).cwiseAbs().maxCoeff());

        // (I − UUᵀ) R (I − VVᵀ) = R − U(UᵀR) − (RV)Vᵀ + U(UᵀRV)Vᵀ
        const Eigen::MatrixXd w = r - u * utr - rv * v.transpose() + u * core * v.transpose();
        worst = std::max(worst, spectral_norm(w) - alpha);
    }

    const auto& ev = e.values();
    for (Index idx = 0; idx < r.size(); ++idx) {
        const double rij = r.data()[idx];
        const double eij = ev.data()[idx];
        const double violation =
            eij == 0.0 ? std::abs(rij) - beta : std::abs(rij - beta * (eij > 0.0 ? 1.0 : -1.0));
        worst = std::max(worst, violation);
    }
    return std::max(worst, 0.0);
}

Mask detect(const DenseMatrix& x_hat, const DenseMatrix& e_hat, double threshold)
{
    require_same_shape(x_hat, e_hat, "detect");
    require_non_negative(threshold, "detection threshold");
    return (x_hat.values().array().abs() > threshold) || (e_hat.values().array().abs() > threshold);
}

Mask detect(const SolverResult& result, double threshold)
{
    return detect(result.x_hat, result.e_hat, threshold);
}

void write_trace(const std::filesystem::path& path, const std::vector<double>& trace)
{
    std::ostringstream out;
    out << "iteration\tobjective\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << k << '\t' << fmt(trace[k]) << '\n';
    }
    tsv::write_file(path, out.str());
}

}  // namespace lrsd
