#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcanml/errors.hpp"

namespace pcanml {

/// Dense real matrix, row-major, finite entries only.
///
/// Every way of putting a value into the matrix goes through a finiteness
/// check, so a RealMatrix never holds NaN or Inf. Dimensions are fixed at
/// construction.
class RealMatrix {
 public:
  RealMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    require_shape(rows, cols);
  }

  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require_shape(rows, cols);
    if (data_.size() != rows * cols) {
      throw DomainError("RealMatrix: expected " + std::to_string(rows * cols) + " entries, got " +
                        std::to_string(data_.size()));
    }
    for (double v : data_) require_finite(v);
  }

  RealMatrix(std::initializer_list<std::initializer_list<double>> rows) : rows_(rows.size()), cols_(0) {
    if (rows_ > 0) cols_ = rows.begin()->size();
    require_shape(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DomainError("RealMatrix: ragged initializer");
      for (double v : r) {
        require_finite(v);
        data_.push_back(v);
      }
    }
  }

  static RealMatrix identity(std::size_t n) {
    RealMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out.data_[i * n + i] = 1.0;
    return out;
  }

  static RealMatrix diagonal(std::span<const double> values) {
    RealMatrix out(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out.set(i, i, values[i]);
    return out;
  }

  static RealMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    require_finite(v);
    data_[i * cols_ + j] = v;
  }

  std::span<const double> entries() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i * cols_ + j];
    return out;
  }

  RealMatrix transpose() const {
    std::vector<double> out(data_.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[j * rows_ + i] = data_[i * cols_ + j];
    return RealMatrix(cols_, rows_, std::move(out));
  }

  // First `count` rows.
  RealMatrix top_rows(std::size_t count) const {
    if (count == 0 || count > rows_) throw DomainError("RealMatrix::top_rows: count out of range");
    return RealMatrix(count, cols_, std::vector<double>(data_.begin(), data_.begin() + count * cols_));
  }

  friend RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("RealMatrix: inner dimensions differ");
    std::vector<double> out(a.rows_ * b.cols_, 0.0);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const double ail = a.data_[i * a.cols_ + l];
        if (ail == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out[i * b.cols_ + j] += ail * b.data_[l * b.cols_ + j];
      }
    return RealMatrix(a.rows_, b.cols_, std::move(out));
  }

  friend RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) { return zip(a, b, -1.0); }
  friend RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) { return zip(a, b, 1.0); }

  friend RealMatrix operator*(double s, const RealMatrix& a) {
    std::vector<double> out(a.data_);
    for (double& v : out) v *= s;
    return RealMatrix(a.rows_, a.cols_, std::move(out));
  }

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  static void require_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw DomainError("RealMatrix: dimensions must be positive");
  }

  static void require_finite(double v) {
    if (!std::isfinite(v)) throw DomainError("RealMatrix: non-finite entry");
  }

  static RealMatrix zip(const RealMatrix& a, const RealMatrix& b, double sign) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("RealMatrix: shapes differ");
    std::vector<double> out(a.data_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data_[i] + sign * b.data_[i];
    return RealMatrix(a.rows_, a.cols_, std::move(out));
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Sum of squared entries.
inline double frobenius_sq(const RealMatrix& x) {
  double acc = 0.0;
  for (double v : x.entries()) acc += v * v;
  return acc;
}

inline double max_abs_entry(const RealMatrix& x) {
  double acc = 0.0;
  for (double v : x.entries()) acc = std::max(acc, std::abs(v));
  return acc;
}

/// ‖XᵀX‖²_F, computed from the Gram matrix directly.
inline double gram_frobenius_sq(const RealMatrix& x) {
  const std::size_t m = x.cols();
  double acc = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      double g = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) g += x(i, a) * x(i, b);
      acc += (a == b ? 1.0 : 2.0) * g * g;
    }
  return acc;
}

}  // namespace pcanml
