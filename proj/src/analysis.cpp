#include "lrsd/analysis.hpp"

#include "lrsd/error.hpp"
#include "lrsd/numerics.hpp"
#include "lrsd/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lrsd::analysis {

namespace {

Labels default_labels(const char* prefix, Index n)
{
    Labels out;
    out.reserve(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
        out.push_back(prefix + std::to_string(k + 1));
    }
    return out;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t a)
    {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

StudyEmbedding embed_studies(const DenseMatrix& x_hat, Index r)
{
    if (r < 1 || r > std::min(x_hat.rows(), x_hat.cols())) {
        fail(Errc::invalid_argument, "embedding rank must lie in [1, min(rows, cols)]");
    }
    const SvdFactors f = svd(x_hat);
    const Index rank = f.rank();
    if (r > rank) {
        fail(Errc::degenerate, "requested embedding rank " + std::to_string(r) + " exceeds the numerical rank " +
                                   std::to_string(rank) + " of the low-rank component");
    }

    StudyEmbedding out;
    out.study_names = x_hat.has_col_labels() ? x_hat.col_labels() : default_labels("study", x_hat.cols());
    out.singular_values = f.singular_values.head(r);
    out.coordinates = f.v.leftCols(r) * out.singular_values.asDiagonal();
    out.snp_factors = f.u.leftCols(r);

    for (Index c = 0; c < r; ++c) {
        Index peak = 0;
        out.coordinates.col(c).cwiseAbs().maxCoeff(&peak);
        if (out.coordinates(peak, c) < 0.0) {
            out.coordinates.col(c) *= -1.0;
            out.snp_factors.col(c) *= -1.0;
        }
    }
    return out;
}

std::vector<int> single_linkage_groups(const Eigen::MatrixXd& coordinates, double radius)
{
    if (!(radius >= 0.0)) {
        fail(Errc::invalid_argument, "linkage radius must be non-negative");
    }
    const auto n = static_cast<std::size_t>(coordinates.rows());
    DisjointSets sets(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double dist =
                (coordinates.row(static_cast<Index>(a)) - coordinates.row(static_cast<Index>(b))).norm();
            if (dist <= radius) sets.unite(a, b);
        }
    }
    std::vector<int> groups(n, -1);
    std::vector<int> id_of_root(n, -1);
    int next = 0;
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t root = sets.find(a);
        if (id_of_root[root] < 0) id_of_root[root] = next++;
        groups[a] = id_of_root[root];
    }
    return groups;
}

SnpReport extract_snps(const SolverResult& result, const Labels& snp_ids, const Labels& study_names,
                       double threshold)
{
    const DenseMatrix& x = result.x_hat;
    const DenseMatrix& e = result.e_hat;
    require_same_shape(x, e, "extract_snps");
    if (static_cast<Index>(snp_ids.size()) != x.rows() || static_cast<Index>(study_names.size()) != x.cols()) {
        fail(Errc::shape_mismatch, "extract_snps: labels do not match a " + std::to_string(x.rows()) + "x" +
                                       std::to_string(x.cols()) + " result");
    }
    if (!(threshold >= 0.0)) {
        fail(Errc::invalid_argument, "threshold must be non-negative");
    }

    SnpReport report;
    report.threshold = threshold;

    for (Index i = 0; i < x.rows(); ++i) {
        const double peak = x.values().row(i).cwiseAbs().maxCoeff();
        if (!(peak > threshold)) continue;
        std::vector<Index> cols;
        for (Index j = 0; j < x.cols(); ++j) {
            if (std::abs(x(i, j)) > threshold) cols.push_back(j);
        }
        std::sort(cols.begin(), cols.end(), [&](Index a, Index b) {
            const double ma = std::abs(x(i, a));
            const double mb = std::abs(x(i, b));
            if (ma != mb) return ma > mb;
            return study_names[static_cast<std::size_t>(a)] < study_names[static_cast<std::size_t>(b)];
        });
        SharedSnp s;
        s.snp_id = snp_ids[static_cast<std::size_t>(i)];
        s.peak = peak;
        for (Index j : cols) {
            s.studies.push_back(study_names[static_cast<std::size_t>(j)]);
            s.values.push_back(x(i, j));
        }
        report.shared.push_back(std::move(s));
    }

    for (Index j = 0; j < e.cols(); ++j) {
        for (Index i = 0; i < e.rows(); ++i) {
            if (std::abs(e(i, j)) > threshold) {
                report.specific.push_back(
                    {snp_ids[static_cast<std::size_t>(i)], study_names[static_cast<std::size_t>(j)], e(i, j)});
            }
        }
    }

    std::sort(report.shared.begin(), report.shared.end(), [](const SharedSnp& a, const SharedSnp& b) {
        if (a.peak != b.peak) return a.peak > b.peak;
        return a.snp_id < b.snp_id;
    });
    std::sort(report.specific.begin(), report.specific.end(), [](const SpecificSnp& a, const SpecificSnp& b) {
        const double ma = std::abs(a.value);
        const double mb = std::abs(b.value);
        if (ma != mb) return ma > mb;
        if (a.snp_id != b.snp_id) return a.snp_id < b.snp_id;
        return a.study < b.study;
    });
    return report;
}

SnpReport extract_snps(const SolverResult& result, double threshold)
{
    const DenseMatrix& x = result.x_hat;
    const Labels rows = x.has_row_labels() ? x.row_labels() : default_labels("row", x.rows());
    const Labels cols = x.has_col_labels() ? x.col_labels() : default_labels("study", x.cols());
    return extract_snps(result, rows, cols, threshold);
}

void write_embedding(const std::filesystem::path& path, const StudyEmbedding& embedding,
                     const std::vector<int>& groups)
{
    if (!groups.empty() && groups.size() != embedding.study_names.size()) {
        fail(Errc::shape_mismatch, "group count does not match study count");
    }
    std::ostringstream out;
    out << "study";
    for (Index c = 0; c < embedding.dimension(); ++c) out << "\tc" << (c + 1);
    if (!groups.empty()) out << "\tgroup";
    out << '\n';
    for (std::size_t s = 0; s < embedding.study_names.size(); ++s) {
        out << embedding.study_names[s];
        for (Index c = 0; c < embedding.dimension(); ++c) {
            out << '\t' << tsv::format_double(embedding.coordinates(static_cast<Index>(s), c));
        }
        if (!groups.empty()) out << '\t' << groups[s];
        out << '\n';
    }
    tsv::write_file(path, out.str());
}

void write_snp_report(const SnpReport& report, const std::filesystem::path& shared_path,
                      const std::filesystem::path& specific_path)
{
    std::ostringstream shared;
    shared << "snp\tstudies\tvalues\tmax_abs\n";
    for (const auto& s : report.shared) {
        shared << s.snp_id << '\t';
        for (std::size_t k = 0; k < s.studies.size(); ++k) shared << (k ? "," : "") << s.studies[k];
        shared << '\t';
        for (std::size_t k = 0; k < s.values.size(); ++k) shared << (k ? "," : "") << tsv::format_double(s.values[k]);
        shared << '\t' << tsv::format_double(s.peak) << '\n';
    }
    tsv::write_file(shared_path, shared.str());

    std::ostringstream specific;
    specific << "snp\tstudy\tvalue\n";
    for (const auto& s : report.specific) {
        specific << s.snp_id << '\t' << s.study << '\t' << tsv::format_double(s.value) << '\n';
    }
    tsv::write_file(specific_path, specific.str());
}

}  // namespace lrsd::analysis
