#include "lrsd/tsv.hpp"

#include "lrsd/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lrsd::tsv {

namespace {

std::vector<std::pair<std::size_t, std::string_view>> split_lines(std::string_view text)
{
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++line_no;
        if (!line.empty()) {
            lines.emplace_back(line_no, line);
        }
        pos = end + 1;
    }
    return lines;
}

bool is_numeric(std::string_view s)
{
    return parse_double(s).has_value();
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& what)
{
    fail(Errc::parse, source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::optional<double> parse_double(std::string_view s)
{
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        fail(Errc::io, "cannot format value");
    }
    return std::string(buf, ptr);
}

std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t end = line.find('\t', pos);
        if (end == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, end - pos));
        pos = end + 1;
    }
    return fields;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(Errc::io, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(Errc::io, "cannot open " + path.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        fail(Errc::io, "write to " + path.string() + " failed");
    }
}

DenseMatrix read_matrix(const std::filesystem::path& path, const ReadOptions& options)
{
    return parse_matrix(read_file(path), options, path.string());
}

DenseMatrix parse_matrix(std::string_view text, const ReadOptions& options, const std::string& source)
{
    const auto lines = split_lines(text);
    if (lines.empty()) {
        fail(Errc::parse, source + ": no data");
    }

    bool row_labels = false;
    if (options.row_labels) {
        row_labels = *options.row_labels;
    } else {
        row_labels = !is_numeric(split_tabs(lines.back().second).front());
    }

    bool header = false;
    if (options.header) {
        header = *options.header;
    } else {
        const auto first = split_tabs(lines.front().second);
        for (std::size_t k = row_labels ? 1 : 0; k < first.size(); ++k) {
            if (!is_numeric(first[k])) {
                header = true;
                break;
            }
        }
    }

    const std::size_t first_data = header ? 1 : 0;
    if (first_data >= lines.size()) {
        fail(Errc::parse, source + ": header without data rows");
    }

    const std::size_t offset = row_labels ? 1 : 0;
    const std::size_t width = split_tabs(lines[first_data].second).size();
    if (width <= offset) {
        parse_fail(source, lines[first_data].first, "row has no values");
    }
    const auto n_cols = static_cast<Index>(width - offset);
    const auto n_rows = static_cast<Index>(lines.size() - first_data);

    Labels col_labels;
    if (header) {
        auto fields = split_tabs(lines.front().second);
        if (row_labels && fields.size() == width) {
            fields.erase(fields.begin());
        }
        if (static_cast<Index>(fields.size()) != n_cols) {
            parse_fail(source, lines.front().first,
                       "header has " + std::to_string(fields.size()) + " names for " + std::to_string(n_cols) +
                           " columns");
        }
        for (auto f : fields) {
            col_labels.emplace_back(f);
        }
    }

    Eigen::MatrixXd values(n_rows, n_cols);
    Labels rlabels;
    for (Index i = 0; i < n_rows; ++i) {
        const auto& [line_no, line] = lines[first_data + static_cast<std::size_t>(i)];
        const auto fields = split_tabs(line);
        if (fields.size() != width) {
            parse_fail(source, line_no,
                       "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
        }
        if (row_labels) {
            rlabels.emplace_back(fields.front());
        }
        for (Index j = 0; j < n_cols; ++j) {
            const auto cell = fields[offset + static_cast<std::size_t>(j)];
            const auto v = parse_double(cell);
            if (!v) {
                parse_fail(source, line_no, "cannot parse '" + std::string(cell) + "' as a number");
            }
            if (!std::isfinite(*v)) {
                parse_fail(source, line_no, "non-finite value '" + std::string(cell) + "'");
            }
            values(i, j) = *v;
        }
    }
    return DenseMatrix(std::move(values), std::move(rlabels), std::move(col_labels));
}

std::string format_matrix(const DenseMatrix& m, const std::string& corner)
{
    std::string out;
    out.reserve(static_cast<std::size_t>(m.size()) * 12);
    if (m.has_col_labels()) {
        if (m.has_row_labels()) {
            out += corner;
            out += '\t';
        }
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out += '\t';
            out += m.col_labels()[static_cast<std::size_t>(j)];
        }
        out += '\n';
    }
    for (Index i = 0; i < m.rows(); ++i) {
        if (m.has_row_labels()) {
            out += m.row_labels()[static_cast<std::size_t>(i)];
            out += '\t';
        }
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out += '\t';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m, const std::string& corner)
{
    write_file(path, format_matrix(m, corner));
}

void write_mask(const std::filesystem::path& path, const Mask& mask, const Labels& row_labels,
                const Labels& col_labels, const std::string& corner)
{
    write_matrix(path, DenseMatrix(mask.cast<double>().matrix(), row_labels, col_labels), corner);
}

}  // namespace lrsd::tsv
