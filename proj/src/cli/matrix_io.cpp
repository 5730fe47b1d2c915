#include "tracelab/cli/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tracelab/cli/report_io.hpp"

namespace tracelab::cli {

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  out << m.dim() << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex v = m.entries()(i, j);
      if (j > 0) out << ' ';
      out << format_double(v.real()) << ' ' << format_double(v.imag());
    }
    out << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& in) {
  long long dim = 0;
  if (!(in >> dim) || dim <= 0) throw ContractViolation("read_matrix: missing or invalid dimension line");
  const auto n = static_cast<Eigen::Index>(dim);
  DenseMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im))
        throw ContractViolation("read_matrix: expected " + std::to_string(2 * dim * dim) + " numbers");
      m(i, j) = Complex{re, im};
    }
  std::string extra;
  if (in >> extra) throw ContractViolation("read_matrix: trailing data after matrix entries");
  return ComplexMatrix(std::move(m));
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ostringstream buf;
  write_matrix(buf, m);
  write_file_atomically(path, buf.str());
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

}  // namespace tracelab::cli
