#pragma once

#include "lrsd/matrix.hpp"
#include "lrsd/solver.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace lrsd::analysis {

/// Study coordinates from the leading right singular vectors of X̂
/// (SNPs × studies), each column scaled by its singular value. Column signs
/// are fixed so the largest-magnitude coordinate is positive.
struct StudyEmbedding {
    std::vector<std::string> study_names;
    Eigen::MatrixXd coordinates;     ///< studies × r
    Eigen::VectorXd singular_values;  ///< leading r values of X̂
    Eigen::MatrixXd snp_factors;      ///< SNPs × r, unit columns

    Index dimension() const noexcept { return coordinates.cols(); }
};

StudyEmbedding embed_studies(const DenseMatrix& x_hat, Index r = 3);

/// Connected components of the graph joining studies closer than `radius`.
/// Group ids are numbered by first appearance.
std::vector<int> single_linkage_groups(const Eigen::MatrixXd& coordinates, double radius);

struct SharedSnp {
    std::string snp_id;
    std::vector<std::string> studies;
    std::vector<double> values;
    double peak = 0.0;  ///< max |X̂| over the row
};

struct SpecificSnp {
    std::string snp_id;
    std::string study;
    double value = 0.0;
};

struct SnpReport {
    std::vector<SharedSnp> shared;
    std::vector<SpecificSnp> specific;
    double threshold = 0.0;
};

SnpReport extract_snps(const SolverResult& result, const Labels& snp_ids, const Labels& study_names,
                       double threshold);
/// Uses the row/column labels carried by the result.
SnpReport extract_snps(const SolverResult& result, double threshold);

void write_embedding(const std::filesystem::path& path, const StudyEmbedding& embedding,
                     const std::vector<int>& groups = {});
void write_snp_report(const SnpReport& report, const std::filesystem::path& shared_path,
                      const std::filesystem::path& specific_path);

}  // namespace lrsd::analysis
