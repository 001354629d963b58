#include "condmpc/problem.hpp"

#include <cmath>
#include <sstream>

#include "condmpc/dense_linalg.hpp"

namespace condmpc {

LqProblemData LqProblemData::basic(Matrix A, Matrix B, Matrix Q, Matrix R, Matrix Qf,
                                   Vector x_bar, Index T) {
  const Index n_x = A.rows();
  const Index n_u = B.cols();
  LqProblemData data;
  data.A = std::move(A);
  data.B = std::move(B);
  data.Q = std::move(Q);
  data.R = std::move(R);
  data.Qf = std::move(Qf);
  data.S = Matrix::Zero(n_x, n_u);
  data.E = Matrix(0, n_x);
  data.F = Matrix(0, n_u);
  data.gl = Vector(0);
  data.gu = Vector(0);
  data.xl = Vector::Constant(n_x, -kInf);
  data.xu = Vector::Constant(n_x, kInf);
  data.ul = Vector::Constant(n_u, -kInf);
  data.uu = Vector::Constant(n_u, kInf);
  data.w.assign(static_cast<std::size_t>(T), Vector::Zero(n_x));
  data.x_bar = std::move(x_bar);
  data.K = Matrix::Zero(n_u, n_x);
  data.T = T;
  return data;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues) out << issue.field << ": " << issue.message << "\n";
  return out.str();
}

Dims dims(const LqProblemData& data) {
  const Index n_x = data.A.rows();
  const Index n_u = data.B.cols();
  const Index n_c = data.E.rows();
  const Index T = static_cast<Index>(data.w.size());

  auto mismatch = [](const std::string& msg) { throw DimensionError("dimension mismatch: " + msg); };

  if (data.A.cols() != n_x) mismatch("A is " + std::to_string(data.A.rows()) + "x" + std::to_string(data.A.cols()) + ", expected square");
  if (data.B.rows() != n_x) mismatch("B has " + std::to_string(data.B.rows()) + " rows but A is " + std::to_string(n_x) + "x" + std::to_string(n_x));
  if (data.Q.rows() != n_x || data.Q.cols() != n_x) mismatch("Q does not match A");
  if (data.Qf.rows() != n_x || data.Qf.cols() != n_x) mismatch("Qf does not match A");
  if (data.R.rows() != n_u || data.R.cols() != n_u) mismatch("R does not match B");
  if (data.S.rows() != n_x || data.S.cols() != n_u) mismatch("S does not match A and B");
  if (n_c > 0 && data.E.cols() != n_x) mismatch("E has " + std::to_string(data.E.cols()) + " cols but A is " + std::to_string(n_x) + "x" + std::to_string(n_x));
  if (data.F.rows() != n_c || (n_c > 0 && data.F.cols() != n_u)) mismatch("F does not match E and B");
  if (data.gl.size() != n_c || data.gu.size() != n_c) mismatch("gl/gu do not match E");
  if (data.xl.size() != n_x || data.xu.size() != n_x) mismatch("xl/xu do not match A");
  if (data.ul.size() != n_u || data.uu.size() != n_u) mismatch("ul/uu do not match B");
  if (data.x_bar.size() != n_x) mismatch("x_bar does not match A");
  if (data.K.rows() != n_u || data.K.cols() != n_x) mismatch("K does not match B and A");
  if (data.T != T) mismatch("T field is " + std::to_string(data.T) + " but w has " + std::to_string(T) + " entries");
  if (T < 1) mismatch("horizon T must be positive");
  for (const auto& wt : data.w) {
    if (wt.size() != n_x) mismatch("w entry does not match A");
  }
  return Dims{n_x, n_u, n_c, T};
}

bool is_positive_semidefinite(const Matrix& sym) {
  if (sym.size() == 0) return true;
  Matrix shifted = 0.5 * (sym + sym.transpose());
  shifted.diagonal().array() += 1e-10;
  try {
    auto backend = linalg::make_backend("reference");
    backend->factorize(shifted);
    return true;
  } catch (const linalg::NotPositiveDefinite&) {
    return false;
  }
}

namespace {

bool has_nan(const Matrix& m) { return m.hasNaN(); }

void check_bound_pair(const Vector& lo, const Vector& hi, const std::string& lo_name,
                      const std::string& hi_name, ValidationReport& report) {
  for (Index i = 0; i < lo.size(); ++i) {
    if (std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] > hi[i]) {
      report.issues.push_back({lo_name + "/" + hi_name,
                               lo_name + " > " + hi_name + " at index " + std::to_string(i)});
    }
  }
}

}  // namespace

ValidationReport validate_problem(const LqProblemData& data) {
  ValidationReport report;

  Dims d;
  try {
    d = dims(data);
  } catch (const DimensionError& err) {
    report.issues.push_back({"dims", err.what()});
    return report;  // shape errors make the remaining checks meaningless
  }
  const Index n_x = d.n_x;
  const Index n_u = d.n_u;

  const std::pair<const Matrix*, const char*> matrices[] = {
      {&data.A, "A"},  {&data.B, "B"},  {&data.Q, "Q"}, {&data.Qf, "Qf"}, {&data.R, "R"},
      {&data.S, "S"},  {&data.E, "E"},  {&data.F, "F"}, {&data.K, "K"}};
  for (const auto& [m, name] : matrices) {
    if (has_nan(*m)) report.issues.push_back({name, std::string(name) + " contains NaN"});
  }
  if (data.x_bar.hasNaN()) report.issues.push_back({"x_bar", "x_bar contains NaN"});
  for (std::size_t t = 0; t < data.w.size(); ++t) {
    if (data.w[t].hasNaN())
      report.issues.push_back({"w", "w contains NaN at step " + std::to_string(t)});
  }

  constexpr double sym_tol = 1e-12;
  if (!is_symmetric(data.Q, sym_tol)) report.issues.push_back({"Q", "Q not symmetric"});
  if (!is_symmetric(data.Qf, sym_tol)) report.issues.push_back({"Qf", "Qf not symmetric"});
  if (!is_symmetric(data.R, sym_tol)) report.issues.push_back({"R", "R not symmetric"});

  if (report.ok()) {
    Matrix stage(n_x + n_u, n_x + n_u);
    stage.topLeftCorner(n_x, n_x) = data.Q;
    stage.topRightCorner(n_x, n_u) = data.S;
    stage.bottomLeftCorner(n_u, n_x) = data.S.transpose();
    stage.bottomRightCorner(n_u, n_u) = data.R;
    if (!is_positive_semidefinite(stage))
      report.issues.push_back({"Q/S/R", "stage cost matrix [Q S; S' R] not positive semidefinite"});
    if (!is_positive_semidefinite(data.Qf))
      report.issues.push_back({"Qf", "Qf not positive semidefinite"});
  }

  check_bound_pair(data.xl, data.xu, "xl", "xu", report);
  check_bound_pair(data.ul, data.uu, "ul", "uu", report);
  check_bound_pair(data.gl, data.gu, "gl", "gu", report);

  // x_0 = x_bar is fixed, so its bounds are checked here once and never enter
  // the dense inequality rows
  for (Index i = 0; i < n_x; ++i) {
    if (std::isfinite(data.xl[i]) && data.x_bar[i] < data.xl[i]) {
      report.issues.push_back({"x_bar", "x_bar violates xl at index " + std::to_string(i)});
    }
    if (std::isfinite(data.xu[i]) && data.x_bar[i] > data.xu[i]) {
      report.issues.push_back({"x_bar", "x_bar violates xu at index " + std::to_string(i)});
    }
  }

  return report;
}

}  // namespace condmpc
