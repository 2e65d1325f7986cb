#pragma once

// Text formats.
//
//   dense matrix:   "rows cols" then `rows` lines of '0'/'1' characters
//   sparse matrix:  "rows cols nnz" then nnz lines "r c" (0-based)
//   graph:          matrices A, B, C back to back
//   integers:       one value per line

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitmatrix.hpp"

namespace regbmm {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MatrixFormat { Dense, Sparse };

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

inline std::vector<std::uint64_t> parse_counts(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::uint64_t> out;
  std::string tok;
  while (ss >> tok) {
    if (tok.find_first_not_of("0123456789") != std::string::npos) {
      throw FormatError("expected nonnegative integers, got '" + tok + "'");
    }
    out.push_back(std::stoull(tok));
  }
  return out;
}

}  // namespace detail

/// Reads one matrix; the header token count selects dense or sparse.
inline BoolMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!detail::next_content_line(in, line)) throw FormatError("missing matrix header");
  const auto header = detail::parse_counts(line);
  if (header.size() != 2 && header.size() != 3) throw FormatError("matrix header must have 2 or 3 fields");
  const std::size_t rows = header[0];
  const std::size_t cols = header[1];
  BoolMatrix m(rows, cols);
  if (header.size() == 2) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) throw FormatError("dense matrix: missing row " + std::to_string(r));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.size() != cols) throw FormatError("dense matrix: row " + std::to_string(r) + " has wrong length");
      for (std::size_t c = 0; c < cols; ++c) {
        if (line[c] == '1') {
          m.set(r, c);
        } else if (line[c] != '0') {
          throw FormatError("dense matrix: entries must be 0 or 1");
        }
      }
    }
    return m;
  }
  const std::uint64_t nnz = header[2];
  for (std::uint64_t i = 0; i < nnz; ++i) {
    if (!detail::next_content_line(in, line)) throw FormatError("sparse matrix: missing entry");
    const auto rc = detail::parse_counts(line);
    if (rc.size() != 2) throw FormatError("sparse matrix: entry lines hold two indices");
    if (rc[0] >= rows || rc[1] >= cols) throw FormatError("sparse matrix: entry out of range");
    m.set(rc[0], rc[1]);
  }
  return m;
}

inline void write_matrix(std::ostream& out, const BoolMatrix& m, MatrixFormat format = MatrixFormat::Dense) {
  if (format == MatrixFormat::Dense) {
    out << m.rows() << ' ' << m.cols() << '\n';
    std::string line(m.cols(), '0');
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) line[c] = m.get(r, c) ? '1' : '0';
      out << line << '\n';
    }
    return;
  }
  out << m.rows() << ' ' << m.cols() << ' ' << m.count_ones() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (Index c : m.row_indices(r)) out << r << ' ' << c << '\n';
  }
}

inline TripartiteGraph read_graph(std::istream& in) {
  BoolMatrix a = read_matrix(in);
  BoolMatrix b = read_matrix(in);
  BoolMatrix c = read_matrix(in);
  return TripartiteGraph(std::move(a), std::move(b), std::move(c));
}

inline void write_graph(std::ostream& out, const TripartiteGraph& g, MatrixFormat format = MatrixFormat::Dense) {
  write_matrix(out, g.a, format);
  write_matrix(out, g.b, format);
  write_matrix(out, g.c, format);
}

inline std::vector<std::int64_t> read_integers(std::istream& in) {
  std::vector<std::int64_t> values;
  std::string line;
  while (detail::next_content_line(in, line)) {
    std::istringstream ss(line);
    std::int64_t v = 0;
    std::string rest;
    if (!(ss >> v) || (ss >> rest)) throw FormatError("expected one integer per line, got '" + line + "'");
    values.push_back(v);
  }
  return values;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace regbmm
