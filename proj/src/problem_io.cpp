#include "condmpc/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace condmpc {

namespace {

constexpr const char* kMagic = "condmpc-problem v1";

void write_value(std::ostream& out, double value) {
  if (std::isinf(value)) {
    out << (value > 0 ? "inf" : "-inf");
    return;
  }
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.write(buf, res.ptr - buf);
}

void write_matrix(std::ostream& out, const char* name, const Matrix& m) {
  out << name << " " << m.rows() << " " << m.cols() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << " ";
      write_value(out, m(i, j));
    }
    out << "\n";
  }
}

void write_vector(std::ostream& out, const char* name, const Vector& v) {
  write_matrix(out, name, v);
}

class Tokenizer {
 public:
  explicit Tokenizer(std::istream& in) : in_(in) {}

  std::optional<std::string> next() {
    std::string tok;
    if (in_ >> tok) return tok;
    return std::nullopt;
  }

  std::string expect() {
    auto tok = next();
    if (!tok) throw ParseError("problem file: unexpected end of input");
    return *tok;
  }

  Index expect_index(const std::string& what) {
    const std::string tok = expect();
    Index value = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || value < 0) {
      throw ParseError("problem file: expected nonnegative integer for " + what + ", got '" + tok + "'");
    }
    return value;
  }

  double expect_double(const std::string& what) {
    const std::string tok = expect();
    double value = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw ParseError("problem file: expected number for " + what + ", got '" + tok + "'");
    }
    return value;
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_problem(std::ostream& out, const LqProblemData& data) {
  out << kMagic << "\n";
  out << "T " << data.T << "\n";
  write_matrix(out, "A", data.A);
  write_matrix(out, "B", data.B);
  write_matrix(out, "Q", data.Q);
  write_matrix(out, "Qf", data.Qf);
  write_matrix(out, "R", data.R);
  write_matrix(out, "S", data.S);
  write_matrix(out, "E", data.E);
  write_matrix(out, "F", data.F);
  write_vector(out, "gl", data.gl);
  write_vector(out, "gu", data.gu);
  write_vector(out, "xl", data.xl);
  write_vector(out, "xu", data.xu);
  write_vector(out, "ul", data.ul);
  write_vector(out, "uu", data.uu);
  Matrix w(static_cast<Index>(data.w.size()), data.A.rows());
  for (Index t = 0; t < w.rows(); ++t) w.row(t) = data.w[static_cast<std::size_t>(t)].transpose();
  write_matrix(out, "w", w);
  write_vector(out, "x_bar", data.x_bar);
  write_matrix(out, "K", data.K);
}

void write_problem_file(const std::string& path, const LqProblemData& data) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  write_problem(out, data);
  if (!out) throw ParseError("write failed: " + path);
}

LqProblemData read_problem(std::istream& in) {
  std::string magic_line;
  std::getline(in, magic_line);
  if (magic_line != kMagic) {
    throw ParseError("problem file: missing header '" + std::string(kMagic) + "'");
  }

  Tokenizer tok(in);
  std::map<std::string, Matrix> entries;
  std::optional<Index> horizon;

  while (auto name = tok.next()) {
    if (*name == "T") {
      horizon = tok.expect_index("T");
      continue;
    }
    const Index rows = tok.expect_index(*name + " rows");
    const Index cols = tok.expect_index(*name + " cols");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) m(i, j) = tok.expect_double(*name);
    }
    if (!entries.emplace(*name, std::move(m)).second) {
      throw ParseError("problem file: duplicate entry '" + *name + "'");
    }
  }

  auto take = [&entries](const char* name) -> Matrix {
    auto it = entries.find(name);
    if (it == entries.end()) throw ParseError(std::string("problem file: missing entry '") + name + "'");
    Matrix m = std::move(it->second);
    entries.erase(it);
    return m;
  };
  auto take_vector = [&take](const char* name) -> Vector {
    Matrix m = take(name);
    if (m.cols() > 1) throw ParseError(std::string("problem file: '") + name + "' must have one column");
    if (m.cols() == 0) return Vector(0);
    return m.col(0);
  };

  if (!horizon) throw ParseError("problem file: missing entry 'T'");

  LqProblemData data;
  data.T = *horizon;
  data.A = take("A");
  data.B = take("B");
  data.Q = take("Q");
  data.Qf = take("Qf");
  data.R = take("R");
  data.S = take("S");
  data.E = take("E");
  data.F = take("F");
  data.gl = take_vector("gl");
  data.gu = take_vector("gu");
  data.xl = take_vector("xl");
  data.xu = take_vector("xu");
  data.ul = take_vector("ul");
  data.uu = take_vector("uu");
  Matrix w = take("w");
  data.w.reserve(static_cast<std::size_t>(w.rows()));
  for (Index t = 0; t < w.rows(); ++t) data.w.push_back(w.row(t).transpose());
  data.x_bar = take_vector("x_bar");
  data.K = take("K");

  if (!entries.empty()) {
    throw ParseError("problem file: unknown entry '" + entries.begin()->first + "'");
  }
  return data;
}

LqProblemData read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path);
  return read_problem(in);
}

void write_dense_qp(std::ostream& out, const DenseQp& qp) {
  out << "condmpc-dense-qp v1\n";
  write_matrix(out, "H", qp.H);
  write_vector(out, "h", qp.h);
  Matrix h0(1, 1);
  h0(0, 0) = qp.h0;
  write_matrix(out, "h0", h0);
  write_matrix(out, "J", qp.J);
  write_vector(out, "d", qp.d);
}

void write_dense_qp_file(const std::string& path, const DenseQp& qp) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  write_dense_qp(out, qp);
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace condmpc
