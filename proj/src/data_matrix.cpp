#include "dmsens/data_matrix.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dmsens {

DataMatrix::DataMatrix(Matrix values, std::vector<std::string> names,
                       std::vector<ColumnKind> kinds)
    : values_(std::move(values)), names_(std::move(names)), kinds_(std::move(kinds)) {
    if (values_.rows() == 0 || values_.cols() == 0)
        throw Error("DataMatrix requires n >= 1 and d >= 1");
    if (names_.size() != values_.cols() || kinds_.size() != values_.cols())
        throw Error("DataMatrix: column metadata size mismatch");
    for (std::size_t j = 0; j < values_.cols(); ++j) {
        for (std::size_t i = 0; i < values_.rows(); ++i) {
            double v = values_(i, j);
            if (kinds_[j] == ColumnKind::continuous) {
                if (!std::isfinite(v))
                    throw Error("DataMatrix: non-finite entry in continuous column " +
                                names_[j]);
            } else {
                if (!(v >= 0.0) || v != std::floor(v))
                    throw Error("DataMatrix: categorical column " + names_[j] +
                                " must contain non-negative integer codes");
            }
        }
    }
}

DataMatrix DataMatrix::from_values(Matrix values) {
    std::size_t d = values.cols();
    std::vector<std::string> names(d);
    for (std::size_t j = 0; j < d; ++j) names[j] = "x" + std::to_string(j + 1);
    return DataMatrix(std::move(values), std::move(names),
                      std::vector<ColumnKind>(d, ColumnKind::continuous));
}

Matrix DataMatrix::select(const ColumnSelector& sel) const {
    check_selector(sel);
    Matrix out(n_rows(), sel.size());
    for (std::size_t i = 0; i < n_rows(); ++i)
        for (std::size_t c = 0; c < sel.size(); ++c) out(i, c) = values_(i, sel.indices[c]);
    return out;
}

std::vector<double> DataMatrix::column(std::size_t j) const {
    std::vector<double> v(n_rows());
    for (std::size_t i = 0; i < n_rows(); ++i) v[i] = values_(i, j);
    return v;
}

void DataMatrix::check_selector(const ColumnSelector& sel) const {
    std::set<std::size_t> seen;
    for (std::size_t idx : sel.indices) {
        if (idx >= n_cols())
            throw Error("ColumnSelector index " + std::to_string(idx) + " out of bounds (d=" +
                        std::to_string(n_cols()) + ")");
        if (!seen.insert(idx).second)
            throw Error("ColumnSelector indices must be unique");
    }
}

std::size_t DataMatrix::category_count(std::size_t j) const {
    std::set<long long> levels;
    for (std::size_t i = 0; i < n_rows(); ++i)
        levels.insert(static_cast<long long>(values_(i, j)));
    return levels.size();
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(*(last - 1)))) --last;
    if (first == last) return false;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

DataMatrix load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw MissingFileError("cannot open file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() || !in.eof()) lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw Error("empty CSV file: " + path);

    std::size_t first_data = has_header ? 1 : 0;
    if (lines.size() <= first_data) throw Error("CSV has a header but no data rows: " + path);

    std::vector<std::string> header = split_line(lines[has_header ? 0 : 0]);
    std::size_t d = split_line(lines[first_data]).size();

    std::vector<std::string> names(d);
    if (has_header) {
        if (header.size() != d)
            throw RaggedRowsError("header has " + std::to_string(header.size()) +
                                  " fields but row 1 has " + std::to_string(d));
        names = header;
    } else {
        for (std::size_t j = 0; j < d; ++j) names[j] = "x" + std::to_string(j + 1);
    }

    std::size_t n = lines.size() - first_data;
    Matrix values(n, d);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::string> cells = split_line(lines[first_data + r]);
        if (cells.size() != d)
            throw RaggedRowsError("row " + std::to_string(r + 1) + " has " +
                                  std::to_string(cells.size()) + " fields, expected " +
                                  std::to_string(d));
        for (std::size_t c = 0; c < d; ++c) {
            double v = 0.0;
            if (!parse_double(cells[c], v))
                throw NonNumericCellError("non-numeric cell at (" + std::to_string(r + 1) +
                                          "," + std::to_string(c + 1) + "): '" + cells[c] +
                                          "'");
            values(r, c) = v;
        }
    }
    return DataMatrix(std::move(values), std::move(names),
                      std::vector<ColumnKind>(d, ColumnKind::continuous));
}

void write_csv(const DataMatrix& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
        if (j) out << ',';
        out << data.column_names()[j];
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        for (std::size_t j = 0; j < data.n_cols(); ++j) {
            if (j) out << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", data(i, j));
            out << buf;
        }
        out << '\n';
    }
}

DataMatrix sample_uniform(const std::vector<double>& lows, const std::vector<double>& highs,
                          std::size_t n, RngSeed seed) {
    if (lows.size() != highs.size() || lows.empty())
        throw InvalidBoundsError("lows and highs must be non-empty and the same length");
    if (n < 1) throw InvalidBoundsError("n must be >= 1");
    std::size_t p = lows.size();
    for (std::size_t j = 0; j < p; ++j)
        if (!(lows[j] < highs[j]))
            throw InvalidBoundsError("lows[" + std::to_string(j) + "] must be < highs[" +
                                     std::to_string(j) + "]");

    Matrix values(n, p);
    // One substream per row keeps the draw deterministic under any future
    // parallelization of this fill.
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = make_rng(seed, i);
        for (std::size_t j = 0; j < p; ++j) values(i, j) = rng.next_uniform(lows[j], highs[j]);
    }
    return DataMatrix::from_values(std::move(values));
}

}  // namespace dmsens
