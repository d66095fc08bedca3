#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dmsens/errors.hpp"
#include "dmsens/rng.hpp"

namespace dmsens {

/// Dense row-major matrix of doubles. Small by design; the heavy lifting in
/// this library is all n x n kernel/distance algebra on contiguous storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class ColumnKind : std::uint8_t { continuous, categorical };

/// Ordered subset of column positions.
struct ColumnSelector {
    std::vector<std::size_t> indices;

    ColumnSelector() = default;
    ColumnSelector(std::initializer_list<std::size_t> idx) : indices(idx) {}
    explicit ColumnSelector(std::vector<std::size_t> idx) : indices(std::move(idx)) {}

    static ColumnSelector single(std::size_t k) { return ColumnSelector{k}; }
    static ColumnSelector all(std::size_t d) {
        ColumnSelector sel;
        sel.indices.resize(d);
        for (std::size_t i = 0; i < d; ++i) sel.indices[i] = i;
        return sel;
    }

    std::size_t size() const { return indices.size(); }
};

using RngSeed = std::uint64_t;

/// Sample matrix: n rows x d columns with column names and per-column kind.
/// Immutable after construction in all library code paths, so it is safe to
/// share read-only across threads.
class DataMatrix {
public:
    DataMatrix() = default;
    DataMatrix(Matrix values, std::vector<std::string> names, std::vector<ColumnKind> kinds);

    /// Continuous matrix with auto-generated names x1..xd.
    static DataMatrix from_values(Matrix values);

    std::size_t n_rows() const { return values_.rows(); }
    std::size_t n_cols() const { return values_.cols(); }

    const Matrix& values() const { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

    const std::vector<std::string>& column_names() const { return names_; }
    const std::vector<ColumnKind>& column_kinds() const { return kinds_; }
    ColumnKind kind(std::size_t j) const { return kinds_[j]; }

    /// Extract the columns named by `sel` into a dense matrix (row order kept).
    Matrix select(const ColumnSelector& sel) const;

    /// Single column as a vector.
    std::vector<double> column(std::size_t j) const;

    void check_selector(const ColumnSelector& sel) const;

    /// Number of distinct codes in a categorical column (computed on demand).
    std::size_t category_count(std::size_t j) const;

private:
    Matrix values_;
    std::vector<std::string> names_;
    std::vector<ColumnKind> kinds_;
};

/// Parse a CSV file: comma separator, '.' decimal, optional single header
/// row, no quoting. Errors carry 1-based row/column positions.
DataMatrix load_csv(const std::string& path, bool has_header);

/// Write numeric content with round-trip precision plus the header row.
void write_csv(const DataMatrix& data, const std::string& path);

/// n independent rows of uniform draws on the box [lows, highs), one column
/// per bound pair. Deterministic per seed.
DataMatrix sample_uniform(const std::vector<double>& lows, const std::vector<double>& highs,
                          std::size_t n, RngSeed seed);

}  // namespace dmsens
