#pragma once

#include "lrsd/matrix.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lrsd::sumstats {

/// Smallest p-value kept before conversion; z ≈ 37.
inline constexpr double p_floor = 1e-300;

struct StudySummary {
    std::string study_name;
    std::unordered_map<std::string, double> records;
    /// Rows skipped for having too few fields or an empty SNP id.
    std::size_t malformed_rows = 0;
};

/// Parses a study file: tab-separated, header naming at least `snp` and `p`
/// (case-insensitive), extra columns ignored.
StudySummary parse_study(const std::filesystem::path& path, const std::string& study_name);
StudySummary parse_study_text(std::string_view text, const std::string& study_name, const std::string& source);

struct ManifestEntry {
    std::string study_name;
    std::filesystem::path path;
};

/// `name<TAB>path` per line; relative paths resolve against the manifest's
/// directory. Blank lines and lines starting with '#' are skipped.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);
std::vector<StudySummary> load_studies(const std::vector<ManifestEntry>& entries);

enum class ZConvention {
    two_sided,  ///< z = Φ⁻¹(1 − p/2) ≥ 0
    one_sided,  ///< z = Φ⁻¹(1 − p)
};

enum class Imputation {
    null_value,    ///< missing entries get z = 0
    study_median,  ///< missing entries get the study's median retained p
};

/// Converts a p-value to a z-score. Values below `p_floor` are clamped and,
/// when `clamped` is given, reported through it.
double p_to_z(double p, ZConvention convention = ZConvention::two_sided, bool* clamped = nullptr);
double z_to_p(double z, ZConvention convention = ZConvention::two_sided);

struct AlignOptions {
    std::size_t min_coverage = 1;
    ZConvention convention = ZConvention::two_sided;
    Imputation imputation = Imputation::null_value;
};

struct AlignedPanel {
    std::vector<std::string> snp_ids;
    std::vector<std::string> study_names;
    /// p-values after imputation, before conversion.
    DenseMatrix p_values;
    DenseMatrix z_matrix;
    Mask imputed_mask;
    AlignOptions options;
    std::size_t clamped_count = 0;
};

AlignedPanel align(const std::vector<StudySummary>& studies, const AlignOptions& options);

/// Observed (non-imputed) entries of a panel, one study per column.
std::vector<StudySummary> export_studies(const AlignedPanel& panel);

/// z.tsv (SNPs × studies) and imputed.tsv (0/1).
void write_panel(const AlignedPanel& panel, const std::filesystem::path& z_path,
                 const std::filesystem::path& imputed_path);

}  // namespace lrsd::sumstats
