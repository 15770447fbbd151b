#include "tbsc/gf2.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "tbsc/errors.hpp"

namespace tbsc {

BitVector bits_from_string(std::string_view text) {
  BitVector bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits.set(i);
    } else if (text[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1': " +
                                  std::string(text));
    }
  }
  return bits;
}

std::string bits_to_string(const BitVector& bits) {
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i] = '1';
  }
  return out;
}

BinMatrix::BinMatrix(std::size_t rows, std::size_t cols) : cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("BinMatrix needs at least one row and one column");
  }
  rows_.assign(rows, BitVector(cols));
}

BinMatrix BinMatrix::identity(std::size_t n) {
  BinMatrix m(n, n);
  for (std::size_t i = 1; i <= n; ++i) m.set(i, i);
  return m;
}

BinMatrix BinMatrix::from_rows(std::span<const std::string_view> rows) {
  if (rows.empty()) throw DimensionError("BinMatrix needs at least one row");
  BinMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) {
      throw DimensionError("ragged rows in BinMatrix::from_rows");
    }
    m.rows_[r] = bits_from_string(rows[r]);
  }
  return m;
}

BinMatrix BinMatrix::from_rows(std::initializer_list<std::string_view> rows) {
  return from_rows(std::span<const std::string_view>(rows.begin(), rows.size()));
}

void BinMatrix::check_index(std::size_t row, std::size_t col) const {
  if (row < 1 || row > rows() || col < 1 || col > cols_) {
    std::ostringstream msg;
    msg << "index (" << row << ", " << col << ") outside " << rows() << "x" << cols_
        << " matrix";
    throw std::out_of_range(msg.str());
  }
}

bool BinMatrix::get(std::size_t row, std::size_t col) const {
  check_index(row, col);
  return rows_[row - 1][col - 1];
}

void BinMatrix::set(std::size_t row, std::size_t col, bool value) {
  check_index(row, col);
  rows_[row - 1][col - 1] = value;
}

const BitVector& BinMatrix::row(std::size_t row) const {
  check_index(row, 1);
  return rows_[row - 1];
}

void BinMatrix::set_block(std::size_t row, std::size_t col, const BinMatrix& block) {
  check_index(row, col);
  check_index(row + block.rows() - 1, col + block.cols() - 1);
  for (std::size_t r = 0; r < block.rows(); ++r) {
    for (std::size_t c = 0; c < block.cols(); ++c) {
      rows_[row - 1 + r][col - 1 + c] = block.rows_[r][c];
    }
  }
}

BinMatrix BinMatrix::submatrix(std::size_t row, std::size_t col, std::size_t num_rows,
                               std::size_t num_cols) const {
  BinMatrix out(num_rows, num_cols);
  check_index(row, col);
  check_index(row + num_rows - 1, col + num_cols - 1);
  for (std::size_t r = 0; r < num_rows; ++r) {
    for (std::size_t c = 0; c < num_cols; ++c) {
      out.rows_[r][c] = rows_[row - 1 + r][col - 1 + c];
    }
  }
  return out;
}

bool BinMatrix::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const BitVector& r) { return r.none(); });
}

std::size_t BinMatrix::count_ones() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.count();
  return n;
}

std::string BinMatrix::to_text() const {
  std::string out = std::to_string(rows()) + " " + std::to_string(cols_) + "\n";
  for (const auto& r : rows_) {
    out += bits_to_string(r);
    out += '\n';
  }
  return out;
}

BinMatrix BinMatrix::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t r = 0, c = 0;
  if (!(in >> r >> c)) throw std::invalid_argument("matrix text: missing 'rows cols' header");
  BinMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    std::string line;
    if (!(in >> line)) throw std::invalid_argument("matrix text: too few rows");
    if (line.size() != c) throw DimensionError("matrix text: row " + std::to_string(i + 1) +
                                               " has wrong length");
    m.rows_[i] = bits_from_string(line);
  }
  std::string rest;
  if (in >> rest) throw std::invalid_argument("matrix text: trailing content");
  return m;
}

std::ostream& operator<<(std::ostream& os, const BinMatrix& m) { return os << m.to_text(); }

BinMatrix mat_mul(const BinMatrix& a, const BinMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
  BinMatrix out(a.rows(), b.cols());
  for (std::size_t i = 1; i <= a.rows(); ++i) {
    BitVector acc = vec_mul(a.row(i), b);
    for (std::size_t c = 0; c < acc.size(); ++c) {
      if (acc[c]) out.set(i, c + 1);
    }
  }
  return out;
}

BitVector vec_mul(const BitVector& v, const BinMatrix& a) {
  if (v.size() != a.rows()) {
    throw DimensionError("vec_mul: vector of length " + std::to_string(v.size()) +
                         " against " + std::to_string(a.rows()) + " rows");
  }
  BitVector acc(a.cols());
  for (auto j = v.find_first(); j != BitVector::npos; j = v.find_next(j)) {
    acc ^= a.row(j + 1);
  }
  return acc;
}

BinMatrix transpose(const BinMatrix& a) {
  BinMatrix out(a.cols(), a.rows());
  for (std::size_t i = 1; i <= a.rows(); ++i) {
    const auto& row = a.row(i);
    for (auto c = row.find_first(); c != BitVector::npos; c = row.find_next(c)) out.set(c + 1, i);
  }
  return out;
}

std::size_t rank(const BinMatrix& a) {
  std::vector<BitVector> rows;
  rows.reserve(a.rows());
  for (std::size_t i = 1; i <= a.rows(); ++i) rows.push_back(a.row(i));
  return rank(std::move(rows));
}

std::size_t rank(std::vector<BitVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != cols) throw DimensionError("rank: rows of unequal length");
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    auto pivot = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(r), rows.end(),
                              [c](const BitVector& row) { return row[c]; });
    if (pivot == rows.end()) continue;
    std::swap(rows[r], *pivot);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c]) rows[i] ^= rows[r];
    }
    ++r;
  }
  return r;
}

bool is_invertible(const BinMatrix& a) { return a.rows() == a.cols() && rank(a) == a.rows(); }

IncrementalSolver::IncrementalSolver(std::size_t num_vars)
    : num_vars_(num_vars), pivot_row_(num_vars) {}

std::size_t IncrementalSolver::add_variable() {
  for (auto& r : rows_) r.coeffs.push_back(false);
  pivot_row_.emplace_back();
  return num_vars_++;
}

bool IncrementalSolver::row_is_singleton(const Row& r) const { return r.coeffs.count() == 1; }

std::vector<IncrementalSolver::Assignment> IncrementalSolver::add_equation(
    const BitVector& coeffs, bool rhs) {
  if (coeffs.size() != num_vars_) {
    throw DimensionError("equation has " + std::to_string(coeffs.size()) +
                         " coefficients, solver has " + std::to_string(num_vars_) +
                         " variables");
  }
  Row fresh{coeffs, rhs, 0};
  for (const auto& r : rows_) {
    if (fresh.coeffs[r.pivot]) {
      fresh.coeffs ^= r.coeffs;
      fresh.rhs ^= r.rhs;
    }
  }
  if (fresh.coeffs.none()) {
    if (fresh.rhs) throw InconsistentSystem("equation reduces to 0 = 1");
    return {};
  }
  fresh.pivot = fresh.coeffs.find_first();

  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].coeffs[fresh.pivot]) {
      rows_[i].coeffs ^= fresh.coeffs;
      rows_[i].rhs ^= fresh.rhs;
      touched.push_back(i);
    }
  }
  pivot_row_[fresh.pivot] = rows_.size();
  touched.push_back(rows_.size());
  rows_.push_back(std::move(fresh));

  // Singleton rows stay singletons: a reduced new row is zero on every
  // existing pivot column. Only touched rows can change status.
  std::vector<Assignment> pinned;
  for (auto i : touched) {
    if (row_is_singleton(rows_[i])) pinned.push_back({rows_[i].pivot, rows_[i].rhs});
  }
  std::sort(pinned.begin(), pinned.end(),
            [](const Assignment& x, const Assignment& y) { return x.var < y.var; });
  return pinned;
}

bool IncrementalSolver::is_determined(std::size_t var) const { return value(var).has_value(); }

std::optional<bool> IncrementalSolver::value(std::size_t var) const {
  if (var >= num_vars_) throw std::out_of_range("solver variable out of range");
  const auto& p = pivot_row_[var];
  if (!p || !row_is_singleton(rows_[*p])) return std::nullopt;
  return rows_[*p].rhs;
}

std::vector<std::optional<std::size_t>> IncrementalSolver::retire(
    std::span<const std::size_t> vars) {
  std::vector<bool> drop(num_vars_, false);
  for (auto v : vars) {
    if (!is_determined(v)) {
      throw std::logic_error("cannot retire undetermined variable " + std::to_string(v));
    }
    drop[v] = true;
  }

  std::vector<std::optional<std::size_t>> remap(num_vars_);
  std::size_t next = 0;
  for (std::size_t v = 0; v < num_vars_; ++v) {
    if (!drop[v]) remap[v] = next++;
  }

  std::vector<Row> kept;
  kept.reserve(rows_.size());
  for (auto& r : rows_) {
    if (drop[r.pivot]) continue;
    BitVector c(next);
    for (auto v = r.coeffs.find_first(); v != BitVector::npos; v = r.coeffs.find_next(v)) {
      c[*remap[v]] = true;
    }
    kept.push_back({std::move(c), r.rhs, *remap[r.pivot]});
  }
  rows_ = std::move(kept);
  num_vars_ = next;
  pivot_row_.assign(num_vars_, std::nullopt);
  for (std::size_t i = 0; i < rows_.size(); ++i) pivot_row_[rows_[i].pivot] = i;
  return remap;
}

}  // namespace tbsc
