#include "lrsd/sumstats.hpp"

#include "lrsd/error.hpp"
#include "lrsd/numerics.hpp"
#include "lrsd/tsv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>

namespace lrsd::sumstats {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& what)
{
    fail(Errc::parse, source + ":" + std::to_string(line) + ": " + what);
}

// p whose conversion is exactly z = 0
double null_p(ZConvention convention)
{
    return convention == ZConvention::two_sided ? 1.0 : 0.5;
}

}  // namespace

StudySummary parse_study(const std::filesystem::path& path, const std::string& study_name)
{
    if (!std::filesystem::exists(path)) {
        fail(Errc::io, "study '" + study_name + "': file not found: " + path.string());
    }
    return parse_study_text(tsv::read_file(path), study_name, path.string());
}

StudySummary parse_study_text(std::string_view text, const std::string& study_name, const std::string& source)
{
    StudySummary out;
    out.study_name = study_name;

    std::optional<std::size_t> snp_col, p_col;
    std::size_t needed = 0;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        const auto fields = tsv::split_tabs(line);
        if (!have_header) {
            for (std::size_t k = 0; k < fields.size(); ++k) {
                const std::string name = lower(trim(fields[k]));
                if (name == "snp" && !snp_col) snp_col = k;
                if (name == "p" && !p_col) p_col = k;
            }
            if (!snp_col || !p_col) {
                parse_fail(source, line_no, "header must name columns 'snp' and 'p'");
            }
            needed = std::max(*snp_col, *p_col) + 1;
            have_header = true;
            continue;
        }

        if (fields.size() < needed) {
            ++out.malformed_rows;
            continue;
        }
        const std::string_view snp = trim(fields[*snp_col]);
        if (snp.empty()) {
            ++out.malformed_rows;
            continue;
        }
        const std::string_view cell = trim(fields[*p_col]);
        const auto p = tsv::parse_double(cell);
        if (!p || std::isnan(*p)) {
            parse_fail(source, line_no, "cannot parse p-value '" + std::string(cell) + "'");
        }
        if (*p == 0.0) {
            parse_fail(source, line_no, "p-value is 0 for " + std::string(snp));
        }
        if (!(*p > 0.0 && *p <= 1.0)) {
            parse_fail(source, line_no, "p-value " + std::string(cell) + " outside (0, 1]");
        }
        if (!out.records.emplace(std::string(snp), *p).second) {
            parse_fail(source, line_no, "duplicate SNP id " + std::string(snp));
        }
    }
    if (!have_header) {
        fail(Errc::parse, source + ": missing header");
    }
    return out;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest)
{
    if (!std::filesystem::exists(manifest)) {
        fail(Errc::io, "manifest not found: " + manifest.string());
    }
    const std::string text = tsv::read_file(manifest);
    const auto base = manifest.parent_path();
    std::vector<ManifestEntry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = tsv::split_tabs(line);
        if (fields.size() < 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
            parse_fail(manifest.string(), line_no, "expected 'study_name<TAB>path'");
        }
        std::filesystem::path p(std::string(trim(fields[1])));
        if (p.is_relative()) p = base / p;
        entries.push_back({std::string(trim(fields[0])), p});
    }
    if (entries.empty()) {
        fail(Errc::parse, manifest.string() + ": no studies listed");
    }
    return entries;
}

std::vector<StudySummary> load_studies(const std::vector<ManifestEntry>& entries)
{
    std::vector<StudySummary> studies;
    studies.reserve(entries.size());
    for (const auto& e : entries) {
        studies.push_back(parse_study(e.path, e.study_name));
    }
    return studies;
}

double p_to_z(double p, ZConvention convention, bool* clamped)
{
    if (!(p > 0.0 && p <= 1.0)) {
        fail(Errc::domain, "p-value must lie in (0, 1], got " + tsv::format_double(p));
    }
    bool was_clamped = false;
    if (p < p_floor) {
        p = p_floor;
        was_clamped = true;
    }
    double z = 0.0;
    if (convention == ZConvention::two_sided) {
        z = -inverse_normal_cdf(0.5 * p);
    } else {
        if (p == 1.0) {
            p = std::nextafter(1.0, 0.0);
            was_clamped = true;
        }
        z = -inverse_normal_cdf(p);
    }
    if (clamped) *clamped = was_clamped;
    return z == 0.0 ? 0.0 : z;
}

double z_to_p(double z, ZConvention convention)
{
    if (convention == ZConvention::two_sided) {
        return std::min(1.0, 2.0 * normal_upper_tail(std::abs(z)));
    }
    return normal_upper_tail(z);
}

AlignedPanel align(const std::vector<StudySummary>& studies, const AlignOptions& options)
{
    if (studies.empty()) {
        fail(Errc::invalid_argument, "align needs at least one study");
    }
    if (options.min_coverage < 1 || options.min_coverage > studies.size()) {
        fail(Errc::invalid_argument, "min coverage must lie in [1, " + std::to_string(studies.size()) + "], got " +
                                         std::to_string(options.min_coverage));
    }

    std::unordered_map<std::string, std::size_t> coverage;
    for (const auto& s : studies) {
        for (const auto& [snp, p] : s.records) {
            ++coverage[snp];
        }
    }
    AlignedPanel panel;
    panel.options = options;
    std::size_t best = 0;
    for (const auto& [snp, count] : coverage) {
        best = std::max(best, count);
        if (count >= options.min_coverage) {
            panel.snp_ids.push_back(snp);
        }
    }
    if (panel.snp_ids.empty()) {
        fail(Errc::degenerate, "no SNP is reported by at least " + std::to_string(options.min_coverage) +
                                   " studies; maximum coverage is " + std::to_string(best));
    }
    std::sort(panel.snp_ids.begin(), panel.snp_ids.end());

    const auto n = static_cast<Index>(panel.snp_ids.size());
    const auto m = static_cast<Index>(studies.size());
    Eigen::MatrixXd p(n, m);
    Eigen::MatrixXd z(n, m);
    panel.imputed_mask = Mask::Constant(n, m, false);

    for (Index j = 0; j < m; ++j) {
        const auto& records = studies[static_cast<std::size_t>(j)].records;
        panel.study_names.push_back(studies[static_cast<std::size_t>(j)].study_name);

        std::vector<double> observed;
        for (Index i = 0; i < n; ++i) {
            auto it = records.find(panel.snp_ids[static_cast<std::size_t>(i)]);
            if (it == records.end()) {
                panel.imputed_mask(i, j) = true;
            } else {
                p(i, j) = it->second;
                observed.push_back(it->second);
            }
        }
        double fill = null_p(options.convention);
        if (options.imputation == Imputation::study_median && !observed.empty()) {
            fill = median(std::move(observed));
        }
        for (Index i = 0; i < n; ++i) {
            if (panel.imputed_mask(i, j)) {
                p(i, j) = fill;
            }
            bool clamped = false;
            z(i, j) = p_to_z(p(i, j), options.convention, &clamped);
            if (clamped) ++panel.clamped_count;
        }
    }
    panel.p_values = DenseMatrix(std::move(p), panel.snp_ids, panel.study_names);
    panel.z_matrix = DenseMatrix(std::move(z), panel.snp_ids, panel.study_names);
    return panel;
}

std::vector<StudySummary> export_studies(const AlignedPanel& panel)
{
    std::vector<StudySummary> out;
    for (std::size_t j = 0; j < panel.study_names.size(); ++j) {
        StudySummary s;
        s.study_name = panel.study_names[j];
        for (std::size_t i = 0; i < panel.snp_ids.size(); ++i) {
            if (!panel.imputed_mask(static_cast<Index>(i), static_cast<Index>(j))) {
                s.records.emplace(panel.snp_ids[i], panel.p_values(static_cast<Index>(i), static_cast<Index>(j)));
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_panel(const AlignedPanel& panel, const std::filesystem::path& z_path,
                 const std::filesystem::path& imputed_path)
{
    tsv::write_matrix(z_path, panel.z_matrix, "snp");
    tsv::write_mask(imputed_path, panel.imputed_mask, panel.snp_ids, panel.study_names, "snp");
}

}  // namespace lrsd::sumstats
