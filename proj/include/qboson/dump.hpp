#pragma once

// Plain-text operator dump: a header line followed by one "row col real imag"
// line per stored nonzero, 0-based, in row-major order, 17 significant digits.

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "qboson/fock.hpp"
#include "qboson/multimode.hpp"

namespace qboson {

inline void dump_operator(std::ostream& os, const LinearOperator& op) {
  const FockSpace& space = op.space();
  os << "dim " << space.dimension() << " modes " << space.mode_count() << " cutoffs ";
  for (std::size_t m = 0; m < space.mode_count(); ++m) os << (m ? "," : "") << space.cutoff(m);
  os << '\n';
  std::ostringstream line;
  line << std::setprecision(17);
  const SparseMatrix& mat = op.matrix();
  for (Eigen::Index r = 0; r < mat.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(mat, r); it; ++it) {
      line.str("");
      line << it.row() << ' ' << it.col() << ' ' << static_cast<double>(it.value().real()) << ' '
           << static_cast<double>(it.value().imag()) << '\n';
      os << line.str();
    }
  }
}

inline void dump_rmatrix(std::ostream& os, const RMatrix& r) {
  std::ostringstream line;
  line << std::setprecision(17);
  line << "rmatrix n " << r.n << " q " << static_cast<double>(r.q) << '\n';
  os << line.str();
  for (Eigen::Index i = 0; i < r.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.entries.cols(); ++j) {
      if (r.entries(i, j) == 0) continue;
      line.str("");
      line << i << ' ' << j << ' ' << static_cast<double>(r.entries(i, j)) << ' ' << 0.0 << '\n';
      os << line.str();
    }
  }
}

}  // namespace qboson
