#pragma once

#include <iosfwd>
#include <string>

#include "condmpc/problem.hpp"
#include "condmpc/reduction.hpp"

namespace condmpc {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem file format: a line `condmpc-problem v1`, then one entry per field,
// `name rows cols` followed by rows*cols whitespace-separated values in row-major
// order. `T` is written as a scalar entry `T <steps>`; `w` is stored as a T x n_x
// matrix; vectors have one column. `inf` / `-inf` encode infinite bounds. Values
// are written in shortest round-trip form, so finite doubles survive a
// write/read cycle bit-exactly.
void write_problem(std::ostream& out, const LqProblemData& data);
void write_problem_file(const std::string& path, const LqProblemData& data);

LqProblemData read_problem(std::istream& in);
LqProblemData read_problem_file(const std::string& path);

// debugging dump of a reduced problem in the same container format
void write_dense_qp(std::ostream& out, const DenseQp& qp);
void write_dense_qp_file(const std::string& path, const DenseQp& qp);

}  // namespace condmpc
