#pragma once

#include "lrsd/matrix.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lrsd::tsv {

/// Layout hints for reading. Unset fields are detected from the content: a
/// first row with any non-numeric cell is a header, and a non-numeric first
/// cell on the last row marks a row-label column.
struct ReadOptions {
    std::optional<bool> header;
    std::optional<bool> row_labels;
};

DenseMatrix read_matrix(const std::filesystem::path& path, const ReadOptions& options = {});
DenseMatrix parse_matrix(std::string_view text, const ReadOptions& options = {},
                         const std::string& source = "<memory>");

/// Writes labels when present; `corner` fills the top-left cell when both
/// row and column labels exist.
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m, const std::string& corner = "id");
std::string format_matrix(const DenseMatrix& m, const std::string& corner = "id");

void write_mask(const std::filesystem::path& path, const Mask& mask, const Labels& row_labels = {},
                const Labels& col_labels = {}, const std::string& corner = "id");

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view s);

std::vector<std::string_view> split_tabs(std::string_view line);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lrsd::tsv
