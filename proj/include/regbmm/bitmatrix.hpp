#pragma once

// Bit-packed binary matrices viewed as bipartite graphs.
//
// Rows are stored row-major in 64-bit words; bits past `cols` in the last word
// of a row are always zero so whole-word popcounts are exact. A matrix may
// carry row/column labels naming its rows and columns inside an ambient node
// part; submatrices compose labels so that pieces of a decomposition always
// refer to nodes of the original input.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace regbmm {

using Index = std::uint32_t;
using Word = std::uint64_t;

inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyMatrixError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Strictly increasing list of node positions.
class IndexSet {
 public:
  IndexSet() = default;

  explicit IndexSet(std::vector<Index> members) : members_(std::move(members)) {
    for (std::size_t i = 1; i < members_.size(); ++i) {
      if (members_[i - 1] >= members_[i]) {
        throw std::invalid_argument("IndexSet members must be strictly increasing");
      }
    }
  }

  static IndexSet range(std::size_t n) {
    std::vector<Index> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<Index>(i);
    IndexSet s;
    s.members_ = std::move(m);
    return s;
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  Index operator[](std::size_t i) const { return members_[i]; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  const std::vector<Index>& members() const { return members_; }

  bool contains(Index v) const { return std::binary_search(members_.begin(), members_.end(), v); }

  /// Throws unless every member is below `bound`.
  void check_within(std::size_t bound) const {
    if (!members_.empty() && members_.back() >= bound) {
      throw std::out_of_range("index " + std::to_string(members_.back()) + " outside part of size " +
                              std::to_string(bound));
    }
  }

  /// Members of `this` not in `other`.
  IndexSet minus(const IndexSet& other) const {
    std::vector<Index> out;
    std::set_difference(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                        std::back_inserter(out));
    IndexSet s;
    s.members_ = std::move(out);
    return s;
  }

  /// Composition: positions `local` taken through this set's members.
  IndexSet compose(const IndexSet& local) const {
    local.check_within(size());
    std::vector<Index> out;
    out.reserve(local.size());
    for (Index i : local) out.push_back(members_[i]);
    IndexSet s;
    s.members_ = std::move(out);
    return s;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<Index> members_;
};

class BoolMatrix {
 public:
  BoolMatrix() = default;

  BoolMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_(words_for(cols)), bits_(rows * words_for(cols), 0) {}

  static BoolMatrix identity(std::size_t n) {
    BoolMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BoolMatrix ones(std::size_t rows, std::size_t cols) {
    BoolMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = m.row(r);
      std::fill(row.begin(), row.end(), ~Word{0});
      m.clear_padding(r);
    }
    return m;
  }

  /// Builds from rows of '0'/'1' characters; all rows must have equal length.
  static BoolMatrix from_strings(const std::vector<std::string>& lines) {
    const std::size_t cols = lines.empty() ? 0 : lines.front().size();
    BoolMatrix m(lines.size(), cols);
    for (std::size_t r = 0; r < lines.size(); ++r) {
      if (lines[r].size() != cols) throw DimensionError("ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) {
        if (lines[r][c] == '1') {
          m.set(r, c);
        } else if (lines[r][c] != '0') {
          throw std::invalid_argument("matrix entries must be 0 or 1");
        }
      }
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return wpr_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * wpr_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }

  void set(std::size_t r, std::size_t c, bool value = true) {
    Word& w = bits_[r * wpr_ + c / kWordBits];
    const Word mask = Word{1} << (c % kWordBits);
    w = value ? (w | mask) : (w & ~mask);
  }

  std::span<const Word> row(std::size_t r) const { return {bits_.data() + r * wpr_, wpr_}; }
  std::span<Word> row(std::size_t r) { return {bits_.data() + r * wpr_, wpr_}; }

  std::size_t row_count(std::size_t r) const {
    std::size_t n = 0;
    for (Word w : row(r)) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::uint64_t count_ones() const {
    std::uint64_t n = 0;
    for (Word w : bits_) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
  }

  std::vector<Index> row_indices(std::size_t r) const {
    std::vector<Index> out;
    auto words = row(r);
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      Word w = words[wi];
      while (w != 0) {
        out.push_back(static_cast<Index>(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w))));
        w &= w - 1;
      }
    }
    return out;
  }

  bool has_labels() const { return row_labels_.has_value(); }

  Index row_label(std::size_t r) const { return row_labels_ ? (*row_labels_)[r] : static_cast<Index>(r); }
  Index col_label(std::size_t c) const { return col_labels_ ? (*col_labels_)[c] : static_cast<Index>(c); }

  /// Row labels as an IndexSet (identity when unlabeled).
  IndexSet row_label_set() const { return row_labels_ ? *row_labels_ : IndexSet::range(rows_); }
  IndexSet col_label_set() const { return col_labels_ ? *col_labels_ : IndexSet::range(cols_); }

  void set_labels(IndexSet row_labels, IndexSet col_labels) {
    if (row_labels.size() != rows_ || col_labels.size() != cols_) {
      throw DimensionError("label lengths must match matrix dimensions");
    }
    row_labels_ = std::move(row_labels);
    col_labels_ = std::move(col_labels);
  }

  void clear_labels() {
    row_labels_.reset();
    col_labels_.reset();
  }

  /// Entry-and-shape equality; labels are ignored.
  bool same_entries(const BoolMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
  }

  friend bool operator==(const BoolMatrix& a, const BoolMatrix& b) {
    return a.same_entries(b) && a.row_label_set() == b.row_label_set() && a.col_label_set() == b.col_label_set();
  }

  /// Padding invariant: bits beyond `cols` in each row are zero.
  bool padding_clear() const {
    if (cols_ % kWordBits == 0) return true;
    const Word pad = ~Word{0} << (cols_ % kWordBits);
    for (std::size_t r = 0; r < rows_; ++r) {
      if ((bits_[r * wpr_ + wpr_ - 1] & pad) != 0) return false;
    }
    return true;
  }

 private:
  void clear_padding(std::size_t r) {
    if (cols_ % kWordBits == 0 || wpr_ == 0) return;
    bits_[r * wpr_ + wpr_ - 1] &= (Word{1} << (cols_ % kWordBits)) - 1;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t wpr_ = 0;
  std::vector<Word> bits_;
  std::optional<IndexSet> row_labels_;
  std::optional<IndexSet> col_labels_;
};

/// Integer 2-path counts |{y : A(x,y) = B(y,z) = 1}|.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  std::uint32_t& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto e : entries_) t += e;
    return t;
  }

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> entries_;
};

/// Node parts X, Y, Z with edges A: X x Y, B: Y x Z, C: X x Z.
struct TripartiteGraph {
  BoolMatrix a;
  BoolMatrix b;
  BoolMatrix c;

  TripartiteGraph() = default;
  TripartiteGraph(BoolMatrix a_, BoolMatrix b_, BoolMatrix c_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
    validate();
  }

  std::size_t nx() const { return a.rows(); }
  std::size_t ny() const { return a.cols(); }
  std::size_t nz() const { return b.cols(); }

  void validate() const {
    if (a.cols() != b.rows() || a.rows() != c.rows() || b.cols() != c.cols()) {
      throw DimensionError("tripartite graph: incompatible A/B/C dimensions");
    }
  }
};

// ---------------------------------------------------------------------------
// Operations

inline Rational density(const BoolMatrix& a) {
  if (a.empty()) throw EmptyMatrixError("density of an empty matrix is undefined");
  return Rational(BigInt(a.count_ones()), BigInt(a.rows()) * a.cols());
}

inline Rational row_degree(const BoolMatrix& a, std::size_t x) {
  if (x >= a.rows()) throw std::out_of_range("row index out of range");
  if (a.cols() == 0) throw EmptyMatrixError("degree in a matrix without columns");
  return Rational(BigInt(a.row_count(x)), BigInt(a.cols()));
}

inline Rational col_degree(const BoolMatrix& a, std::size_t y) {
  if (y >= a.cols()) throw std::out_of_range("column index out of range");
  if (a.rows() == 0) throw EmptyMatrixError("degree in a matrix without rows");
  std::size_t n = 0;
  for (std::size_t r = 0; r < a.rows(); ++r) n += a.get(r, y) ? 1 : 0;
  return Rational(BigInt(n), BigInt(a.rows()));
}

inline std::vector<std::size_t> column_counts(const BoolMatrix& a) {
  std::vector<std::size_t> counts(a.cols(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto words = a.row(r);
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      Word w = words[wi];
      while (w != 0) {
        ++counts[wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w))];
        w &= w - 1;
      }
    }
  }
  return counts;
}

inline BoolMatrix transpose(const BoolMatrix& a) {
  BoolMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto words = a.row(r);
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      Word w = words[wi];
      while (w != 0) {
        t.set(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w)), r);
        w &= w - 1;
      }
    }
  }
  if (a.has_labels()) t.set_labels(a.col_label_set(), a.row_label_set());
  return t;
}

/// Materialized A[rows, cols]; labels compose through A's labels.
inline BoolMatrix submatrix(const BoolMatrix& a, const IndexSet& rows, const IndexSet& cols) {
  rows.check_within(a.rows());
  cols.check_within(a.cols());
  BoolMatrix out(rows.size(), cols.size());
  const bool all_cols = cols.size() == a.cols();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = a.row(rows[i]);
    if (all_cols) {
      std::copy(src.begin(), src.end(), out.row(i).begin());
      continue;
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const Index c = cols[j];
      if ((src[c / kWordBits] >> (c % kWordBits)) & 1U) out.set(i, j);
    }
  }
  out.set_labels(a.row_label_set().compose(rows), a.col_label_set().compose(cols));
  return out;
}

inline BoolMatrix row_submatrix(const BoolMatrix& a, const IndexSet& rows) {
  return submatrix(a, rows, IndexSet::range(a.cols()));
}

/// Copy of A with the rectangle rows x cols cleared.
inline BoolMatrix zero_rectangle(const BoolMatrix& a, const IndexSet& rows, const IndexSet& cols) {
  rows.check_within(a.rows());
  cols.check_within(a.cols());
  BoolMatrix out = a;
  std::vector<Word> mask(a.words_per_row(), 0);
  for (Index c : cols) mask[c / kWordBits] |= Word{1} << (c % kWordBits);
  for (Index r : rows) {
    auto words = out.row(r);
    for (std::size_t wi = 0; wi < words.size(); ++wi) words[wi] &= ~mask[wi];
  }
  return out;
}

inline BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("bool_product: inner dimensions differ");
  BoolMatrix out(a.rows(), b.cols());
  for (std::size_t x = 0; x < a.rows(); ++x) {
    auto dst = out.row(x);
    auto words = a.row(x);
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      Word w = words[wi];
      while (w != 0) {
        auto src = b.row(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] |= src[k];
        w &= w - 1;
      }
    }
  }
  return out;
}

inline std::size_t and_count(std::span<const Word> lhs, std::span<const Word> rhs) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) n += static_cast<std::size_t>(std::popcount(lhs[i] & rhs[i]));
  return n;
}

inline bool and_any(std::span<const Word> lhs, std::span<const Word> rhs) {
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if ((lhs[i] & rhs[i]) != 0) return true;
  }
  return false;
}

/// Unscaled 2-path counts; A o B equals these counts divided by the inner dimension.
inline CountMatrix count_product(const BoolMatrix& a, const BoolMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("count_product: inner dimensions differ");
  const BoolMatrix bt = transpose(b);
  CountMatrix out(a.rows(), b.cols());
  for (std::size_t x = 0; x < a.rows(); ++x) {
    for (std::size_t z = 0; z < b.cols(); ++z) {
      out.at(x, z) = static_cast<std::uint32_t>(and_count(a.row(x), bt.row(z)));
    }
  }
  return out;
}

/// Rows of A whose relative degree is nonzero, as positions.
inline std::vector<std::size_t> row_counts(const BoolMatrix& a) {
  std::vector<std::size_t> counts(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) counts[r] = a.row_count(r);
  return counts;
}

}  // namespace regbmm
