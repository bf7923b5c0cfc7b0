#pragma once

#include "lrsd/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

struct SupportProbe {
    lrsd::DenseMatrix data;
    lrsd::Mask support;
};

/// 20×10 noiseless matrix: a rank-1 block 30·u·vᵀ on 6 rows × 4 columns
/// (unnormalised factor magnitudes in [1, 2], random signs) plus five
/// spikes of 10 placed off the block.
inline SupportProbe noiseless_probe(std::uint64_t seed)
{
    constexpr int n = 20;
    constexpr int p = 10;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(1.0, 2.0);
    std::bernoulli_distribution flip(0.5);

    std::vector<int> rows(n), cols(p);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
    for (int k = 0; k < 6; ++k) u(rows[k]) = mag(rng) * (flip(rng) ? 1.0 : -1.0);
    for (int k = 0; k < 4; ++k) v(cols[k]) = mag(rng) * (flip(rng) ? 1.0 : -1.0);
    u.normalize();
    v.normalize();
    Eigen::MatrixXd d = 30.0 * u * v.transpose();

    std::vector<std::pair<int, int>> free;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            if (d(i, j) == 0.0) free.emplace_back(i, j);
        }
    }
    std::shuffle(free.begin(), free.end(), rng);
    for (int k = 0; k < 5; ++k) d(free[k].first, free[k].second) = 10.0;

    SupportProbe out{lrsd::DenseMatrix(d), (d.array() != 0.0)};
    return out;
}

struct PlantedClusters {
    lrsd::DenseMatrix x_hat;  ///< SNPs × studies
    std::vector<int> group;    ///< planted group of each study
};

/// Low-rank matrix whose studies fall into `groups` clusters: each cluster
/// shares one SNP profile (mutually orthogonal across clusters) with a mild
/// per-study loading in [0.9, 1.1].
inline PlantedClusters planted_clusters(int snps, int studies_per_group, int groups, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> load(0.9, 1.1);

    Eigen::MatrixXd profiles(snps, groups);
    for (int i = 0; i < snps; ++i) {
        for (int k = 0; k < groups; ++k) profiles(i, k) = g(rng);
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(profiles);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(snps, groups);

    const int studies = studies_per_group * groups;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(snps, studies);
    PlantedClusters out;
    lrsd::Labels names;
    for (int s = 0; s < studies; ++s) {
        const int k = s % groups;
        x.col(s) = (20.0 + 10.0 * k) * load(rng) * q.col(k);
        out.group.push_back(k);
        names.push_back("study" + std::to_string(s + 1));
    }
    lrsd::Labels snp_ids;
    for (int i = 0; i < snps; ++i) snp_ids.push_back("rs" + std::to_string(i + 1));
    out.x_hat = lrsd::DenseMatrix(x, snp_ids, names);
    return out;
}

/// True when two labelings define the same partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if ((a[i] == a[j]) != (b[i] == b[j])) return false;
        }
    }
    return true;
}

/// Non-negative z-score panel shaped like a multi-study GWAS matrix:
/// |N(0,1)| background, three study groups sharing signal on about 1% of
/// SNPs each, and sparse study-specific hits.
inline Eigen::MatrixXd synthetic_z_panel(Eigen::Index snps, Eigen::Index studies, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> uni;
    Eigen::MatrixXd z(snps, studies);
    for (Eigen::Index j = 0; j < studies; ++j) {
        for (Eigen::Index i = 0; i < snps; ++i) z(i, j) = std::abs(g(rng));
    }
    for (Eigen::Index i = 0; i < snps; ++i) {
        const double u = uni(rng);
        if (u < 0.03) {
            const auto k = static_cast<Eigen::Index>(u / 0.01);
            const double s = 3.0 + 3.0 * uni(rng);
            for (Eigen::Index j = k; j < studies; j += 3) z(i, j) += s;
        }
        if (uni(rng) < 0.002) {
            z(i, static_cast<Eigen::Index>(uni(rng) * static_cast<double>(studies))) += 8.0;
        }
    }
    return z;
}

}  // namespace fixtures
