#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace tbsc {

using BitVector = boost::dynamic_bitset<std::uint64_t>;

/// Parses a string of '0'/'1' characters; bit 0 is the first character.
BitVector bits_from_string(std::string_view text);
/// Inverse of bits_from_string.
std::string bits_to_string(const BitVector& bits);

/// Dense matrix over GF(2) with bit-packed rows.
///
/// Row and column indices in the public interface are 1-based, matching the
/// [n] = {1..n} convention used by every construction in this library.
class BinMatrix {
 public:
  BinMatrix(std::size_t rows, std::size_t cols);

  static BinMatrix identity(std::size_t n);
  /// Builds a matrix from rows written as '0'/'1' strings of equal length.
  static BinMatrix from_rows(std::span<const std::string_view> rows);
  static BinMatrix from_rows(std::initializer_list<std::string_view> rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t row, std::size_t col) const;
  void set(std::size_t row, std::size_t col, bool value = true);

  const BitVector& row(std::size_t row) const;
  /// Copies `block` so that its (1,1) entry lands on (row, col).
  void set_block(std::size_t row, std::size_t col, const BinMatrix& block);
  BinMatrix submatrix(std::size_t row, std::size_t col, std::size_t num_rows,
                      std::size_t num_cols) const;

  bool is_zero() const;
  std::size_t count_ones() const;

  friend bool operator==(const BinMatrix&, const BinMatrix&) = default;

  /// "rows cols" header line followed by one '0'/'1' line per row.
  std::string to_text() const;
  static BinMatrix from_text(std::string_view text);

 private:
  void check_index(std::size_t row, std::size_t col) const;

  std::size_t cols_;
  std::vector<BitVector> rows_;
};

std::ostream& operator<<(std::ostream& os, const BinMatrix& m);

BinMatrix mat_mul(const BinMatrix& a, const BinMatrix& b);
/// Row vector times matrix: v (1 x a.rows()) * a.
BitVector vec_mul(const BitVector& v, const BinMatrix& a);

BinMatrix transpose(const BinMatrix& a);

std::size_t rank(const BinMatrix& a);
/// Rank of the matrix whose rows are `rows` (all of equal length).
std::size_t rank(std::vector<BitVector> rows);
bool is_invertible(const BinMatrix& a);

/// Gauss-Jordan elimination over GF(2) that accepts equations one at a time
/// and reports which unknowns each new equation pins down.
///
/// Equations are kept in reduced row-echelon form. The pivot of a new row is
/// its lowest-indexed nonzero column. A variable is determined exactly when
/// its pivot row has no other nonzero coefficient.
class IncrementalSolver {
 public:
  struct Assignment {
    std::size_t var;
    bool value;
    friend bool operator==(const Assignment&, const Assignment&) = default;
  };

  explicit IncrementalSolver(std::size_t num_vars = 0);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_equations() const { return rows_.size(); }

  /// Appends a fresh unknown and returns its index.
  std::size_t add_variable();

  /// Incorporates `coeffs . x = rhs`. Returns the variables that became
  /// determined by this equation, in increasing index order.
  /// Throws InconsistentSystem if the equation contradicts earlier ones.
  std::vector<Assignment> add_equation(const BitVector& coeffs, bool rhs);

  bool is_determined(std::size_t var) const;
  std::optional<bool> value(std::size_t var) const;

  /// Drops the given determined variables together with their pivot rows and
  /// renumbers the survivors densely in their original order. Returns the
  /// old-index -> new-index map (nullopt for removed variables).
  std::vector<std::optional<std::size_t>> retire(std::span<const std::size_t> vars);

 private:
  struct Row {
    BitVector coeffs;
    bool rhs;
    std::size_t pivot;
  };

  bool row_is_singleton(const Row& r) const;

  std::size_t num_vars_;
  std::vector<Row> rows_;
  // pivot_row_[v] is the index into rows_ whose pivot is v.
  std::vector<std::optional<std::size_t>> pivot_row_;
};

}  // namespace tbsc
