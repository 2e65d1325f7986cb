#include <gtest/gtest.h>

#include <sstream>

#include "regbmm/io.hpp"
#include "regbmm/random.hpp"

using namespace regbmm;

TEST(Io, DenseRoundTrip) {
  const BoolMatrix a = random_matrix(13, 70, Rational(1, 3), 1);
  std::stringstream ss;
  write_matrix(ss, a);
  EXPECT_EQ(read_matrix(ss), a);
}

TEST(Io, SparseRoundTrip) {
  const BoolMatrix a = random_matrix(20, 9, Rational(1, 5), 2);
  std::stringstream ss;
  write_matrix(ss, a, MatrixFormat::Sparse);
  EXPECT_EQ(read_matrix(ss), a);
}

TEST(Io, DenseLayout) {
  std::stringstream ss;
  write_matrix(ss, BoolMatrix::identity(2));
  EXPECT_EQ(ss.str(), "2 2\n10\n01\n");
  std::stringstream sp;
  write_matrix(sp, BoolMatrix::identity(2), MatrixFormat::Sparse);
  EXPECT_EQ(sp.str(), "2 2 2\n0 0\n1 1\n");
}

TEST(Io, GraphRoundTrip) {
  Rng rng(3);
  const TripartiteGraph g = random_graph(5, 6, 7, Rational(1, 2), rng);
  std::stringstream ss;
  write_graph(ss, g, MatrixFormat::Sparse);
  const TripartiteGraph h = read_graph(ss);
  EXPECT_EQ(h.a, g.a);
  EXPECT_EQ(h.b, g.b);
  EXPECT_EQ(h.c, g.c);
}

TEST(Io, MalformedInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_matrix(in);
  };
  EXPECT_THROW(parse(""), FormatError);
  EXPECT_THROW(parse("2 2\n10\n"), FormatError);
  EXPECT_THROW(parse("2 2\n10\n0x\n"), FormatError);
  EXPECT_THROW(parse("2 2 1\n2 0\n"), FormatError);
  EXPECT_THROW(parse("2\n"), FormatError);
  EXPECT_THROW(parse("-1 2\n"), FormatError);
}

TEST(Io, GraphDimensionsChecked) {
  std::istringstream in("1 2\n10\n3 1\n1\n0\n1\n1 1\n1\n");
  EXPECT_THROW(read_graph(in), DimensionError);
}

TEST(Io, Integers) {
  std::istringstream in("1\n-2\n\n30\n");
  EXPECT_EQ(read_integers(in), (std::vector<std::int64_t>{1, -2, 30}));
  std::istringstream bad("1 2\n");
  EXPECT_THROW(read_integers(bad), FormatError);
}
