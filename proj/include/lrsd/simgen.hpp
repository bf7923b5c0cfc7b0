#pragma once

#include "lrsd/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace lrsd::sim {

inline constexpr Index n_rows = 100;
inline constexpr Index n_cols = 50;

struct PatternSpec {
    int pattern_id = 1;
    double scale = 50.0;
    double sparse_prob = 0.01;
    double sparse_value = 6.0;
    double noise_sigma = 1.0;
    double signal_divisor = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Unit-norm factors of the benchmark biclusters: u₁, u₂ index the 100 rows
/// and v₁, v₂ the 50 columns.
struct FactorVectors {
    Eigen::VectorXd u1;
    Eigen::VectorXd v1;
    Eigen::VectorXd u2;
    Eigen::VectorXd v2;
};

FactorVectors factor_vectors();

struct SimulatedInstance {
    PatternSpec spec;
    DenseMatrix data;
    /// Signal after scaling and shuffling, before noise.
    DenseMatrix truth_signal;
    DenseMatrix noise;
    Mask truth_mask;
    /// Position i of the shuffled matrix holds original row row_perm[i].
    std::vector<Index> row_perm;
    std::vector<Index> col_perm;
    double snr = 0.0;
};

/// Noise-free, unshuffled signal of a pattern (before division).
Eigen::MatrixXd base_signal(int pattern_id, double scale);

SimulatedInstance generate(const PatternSpec& spec);

/// RMS of the signal over its nonzero support divided by the noise scale.
double compute_snr(const DenseMatrix& truth_signal, double noise_sigma);

/// Writes data.tsv, truth.tsv, mask.tsv and meta.txt into `dir`.
void write_instance(const SimulatedInstance& instance, const std::filesystem::path& dir);

}  // namespace lrsd::sim
