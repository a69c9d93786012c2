#pragma once
#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>
#include <dfscreen/errors.hpp>
#include <dfscreen/linalg.hpp>

namespace dfscreen::io {

/// Numeric table with a header row: one response column, the rest features
/// (in file order).
struct CsvDataset
{
    std::vector<std::string> header;
    std::string response_col;
    std::vector<std::string> feature_cols;
    Matrix x;
    Vector y;
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Parses comma-separated text: first row header, '.' decimals, no quoting.
/// Line numbers in error messages are 1-based and count the header.
inline CsvDataset parse_csv_dataset(std::istream& in, const std::string& response_col)
{
    CsvDataset d;
    std::string line;
    if (!std::getline(in, line)) throw IoError("csv: empty input");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    for (auto f : detail::split_commas(line)) d.header.emplace_back(detail::trim(f));

    const auto resp = std::find(d.header.begin(), d.header.end(), response_col);
    if (resp == d.header.end()) throw IoError("csv: response column '" + response_col + "' not found in header");
    const auto resp_idx = static_cast<std::size_t>(resp - d.header.begin());
    d.response_col = response_col;
    for (std::size_t j = 0; j < d.header.size(); ++j) {
        if (j != resp_idx) d.feature_cols.push_back(d.header[j]);
    }
    if (d.feature_cols.empty()) throw IoError("csv: no feature columns");

    std::vector<std::vector<double>> rows;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_commas(line);
        if (fields.size() != d.header.size()) {
            throw IoError("csv: row " + std::to_string(line_no) + " has " + std::to_string(fields.size())
                          + " fields, expected " + std::to_string(d.header.size()));
        }
        std::vector<double> row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const auto f = detail::trim(fields[j]);
            if (f.empty()) {
                throw IoError("csv: missing value at row " + std::to_string(line_no) + ", column '"
                              + d.header[j] + "'");
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || ptr != f.data() + f.size()) {
                throw IoError("csv: non-numeric value '" + std::string(f) + "' at row "
                              + std::to_string(line_no) + ", column '" + d.header[j] + "'");
            }
            row[j] = v;
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw IoError("csv: need at least two data rows");

    const auto n = static_cast<Index>(rows.size());
    d.x.resize(n, static_cast<Index>(d.feature_cols.size()));
    d.y.resize(n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        Index col = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j == resp_idx) d.y[i] = row[j];
            else d.x(i, col++) = row[j];
        }
    }
    return d;
}

inline CsvDataset read_csv_dataset(const std::string& path, const std::string& response_col)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_csv_dataset(in, response_col);
}

/// Writes `response_name` first, then features x1..xp (or the given names).
inline void write_csv_dataset(std::ostream& out, const Matrix& x, const Vector& y,
                              const std::string& response_name = "y",
                              std::vector<std::string> feature_names = {})
{
    if (feature_names.empty()) {
        for (Index j = 0; j < x.cols(); ++j) feature_names.push_back("x" + std::to_string(j + 1));
    }
    out << response_name;
    for (const auto& name : feature_names) out << ',' << name;
    out << '\n';
    out << std::setprecision(17);
    for (Index i = 0; i < x.rows(); ++i) {
        out << y[i];
        for (Index j = 0; j < x.cols(); ++j) out << ',' << x(i, j);
        out << '\n';
    }
}

} // namespace dfscreen::io
