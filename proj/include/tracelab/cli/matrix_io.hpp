#pragma once

#include <iosfwd>
#include <string>

#include "tracelab/matrix_core.hpp"

namespace tracelab::cli {

// Text dump: a line holding the dimension, then one line per row with
// whitespace-separated "re im" pairs printed to 17 significant digits.
void write_matrix(std::ostream& out, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& in);

void save_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix load_matrix(const std::string& path);

}  // namespace tracelab::cli
