#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "intertwine/rational.hpp"

namespace intertwine {

/// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> data);

  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<Rational> column(std::size_t c) const;

  const std::vector<Rational>& data() const { return data_; }

  bool is_zero() const;
  RatMatrix transpose() const;
  /// Leading rows [0, count).
  RatMatrix top_rows(std::size_t count) const;

  /// Matrix times column vector.
  std::vector<Rational> apply(std::span<const Rational> v) const;
  /// Row vector times matrix.
  std::vector<Rational> left_apply(std::span<const Rational> v) const;

  RatMatrix& operator+=(const RatMatrix& o);
  RatMatrix& operator-=(const RatMatrix& o);
  RatMatrix& operator*=(const Rational& s);

  friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
  friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
  friend RatMatrix operator*(RatMatrix a, const Rational& s) { return a *= s; }
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form computed in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(RatMatrix& m);

std::size_t rank(RatMatrix m);

}  // namespace intertwine
