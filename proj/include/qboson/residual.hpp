#pragma once

// Residual measurement of operator relations on the truncation-safe subspace.
//
// A relation lhs = rhs that holds in the untruncated algebra can fail near the
// cutoff because raising operators annihilate the top state. relation_residual
// projects both sides onto the states at least `margin` steps below every
// cutoff and measures the norm of the difference there.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qboson/fock.hpp"

namespace qboson {

enum class Norm { spectral, frobenius };

/// working_precision treats an entry pair as equal when the extended-precision
/// values agree to one double-precision ulp of the larger operand; raw keeps
/// every extended-precision difference.
enum class Comparison { working_precision, raw };

struct ResidualOptions {
  std::string name = "relation";
  double tolerance = 1e-10;
  Norm norm = Norm::spectral;
  Comparison comparison = Comparison::working_precision;
};

struct ResidualReport {
  std::string relation_name;
  double residual = 0;
  /// Same norm without the working-precision agreement filter.
  double raw_residual = 0;
  int margin = 0;
  double tolerance = 0;
  bool passed = false;
};

using DoubleSparse = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;

/// Flat indices of the states with n_m <= cutoff_m - margin for every mode.
inline std::vector<std::size_t> safe_indices(const FockSpace& space, int margin) {
  if (margin < 0) throw argument_error("margin must be nonnegative");
  if (margin >= space.min_cutoff()) {
    throw argument_error("margin " + std::to_string(margin) +
                         " leaves no safe states (min cutoff " +
                         std::to_string(space.min_cutoff()) + ")");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    bool ok = true;
    for (std::size_t m = 0; m < space.mode_count() && ok; ++m) {
      ok = space.occupation(i, m) <= space.cutoffs()[m] - margin;
    }
    if (ok) out.push_back(i);
  }
  return out;
}

inline double frobenius_norm(const DoubleSparse& m) {
  double s = 0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (DoubleSparse::InnerIterator it(m, k); it; ++it) s += std::norm(it.value());
  }
  return std::sqrt(s);
}

inline double spectral_norm(const DoubleSparse& m) {
  if (m.nonZeros() == 0) return 0;

  // Weighted permutations (at most one entry per row and column), which
  // covers every diagonal and shift-like residual, have norm max |entry|.
  std::vector<int> per_col(static_cast<std::size_t>(m.cols()), 0);
  bool monomial = true;
  double max_abs = 0;
  for (Eigen::Index k = 0; k < m.outerSize() && monomial; ++k) {
    int per_row = 0;
    for (DoubleSparse::InnerIterator it(m, k); it; ++it) {
      if (it.value() == std::complex<double>(0)) continue;
      max_abs = std::max(max_abs, std::abs(it.value()));
      if (++per_row > 1 || ++per_col[static_cast<std::size_t>(it.col())] > 1) monomial = false;
    }
  }
  if (monomial) return max_abs;

  if (m.rows() <= 512 && m.cols() <= 512) {
    Eigen::MatrixXcd d(m);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
    return svd.singularValues()(0);
  }

  // Lanczos on m^H m with full reorthogonalization from a fixed start vector;
  // stops once the top Ritz pair's residual bound is below 1e-14 relative.
  const DoubleSparse mh = m.adjoint();
  const Eigen::Index n = m.cols();
  const Eigen::Index kmax = std::min<Eigen::Index>(n, 1000);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 1e-3 * static_cast<double>(i % 7);
  v.normalize();
  std::vector<Eigen::VectorXcd> basis;
  std::vector<double> diag, offdiag;
  double theta = 0;
  for (Eigen::Index k = 0; k < kmax; ++k) {
    basis.push_back(v);
    Eigen::VectorXcd w = mh * (m * v);
    diag.push_back(v.dot(w).real());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) w -= q * q.dot(w);
    }
    const double b = w.norm();
    const auto size = static_cast<Eigen::Index>(diag.size());
    if (size % 10 != 0 && k + 1 < kmax && b > 1e-13 * std::abs(diag.back())) {
      offdiag.push_back(b);
      v = w / b;
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(Eigen::Map<Eigen::VectorXd>(diag.data(), size),
                              Eigen::Map<Eigen::VectorXd>(offdiag.data(), size - 1),
                              Eigen::ComputeEigenvectors);
    theta = es.eigenvalues()(size - 1);
    const double bound = b * std::abs(es.eigenvectors()(size - 1, size - 1));
    if (bound <= 1e-14 * theta || b <= 1e-13 * std::max(theta, 1e-300)) break;
    offdiag.push_back(b);
    v = w / b;
  }
  return std::sqrt(std::max(theta, 0.0));
}

inline double operator_norm(const DoubleSparse& m, Norm norm) {
  return norm == Norm::spectral ? spectral_norm(m) : frobenius_norm(m);
}

inline ResidualReport relation_residual(const LinearOperator& lhs, const LinearOperator& rhs,
                                        int margin, const ResidualOptions& opts = {}) {
  require_same_space(lhs.space(), rhs.space(), "relation_residual");
  const auto safe = safe_indices(lhs.space(), margin);

  std::vector<Eigen::Index> position(lhs.space().dimension(), -1);
  for (std::size_t k = 0; k < safe.size(); ++k) position[safe[k]] = static_cast<Eigen::Index>(k);

  constexpr real ulp = std::numeric_limits<double>::epsilon();
  using DTriplet = Eigen::Triplet<std::complex<double>>;
  std::vector<DTriplet> filtered;
  std::vector<DTriplet> raw;
  const auto to_double = [](complex z) {
    return std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  };

  std::map<Eigen::Index, std::pair<complex, complex>> row;
  for (std::size_t k = 0; k < safe.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(safe[k]);
    row.clear();
    for (SparseMatrix::InnerIterator it(lhs.matrix(), i); it; ++it) {
      if (position[static_cast<std::size_t>(it.col())] >= 0) row[it.col()].first += it.value();
    }
    for (SparseMatrix::InnerIterator it(rhs.matrix(), i); it; ++it) {
      if (position[static_cast<std::size_t>(it.col())] >= 0) row[it.col()].second += it.value();
    }
    for (const auto& [col, lr] : row) {
      const complex d = lr.first - lr.second;
      if (d == complex(0)) continue;
      const auto r = static_cast<Eigen::Index>(k);
      const auto c = position[static_cast<std::size_t>(col)];
      raw.emplace_back(r, c, to_double(d));
      const real scale = std::max(std::abs(lr.first), std::abs(lr.second));
      if (std::abs(d) > ulp * scale) filtered.emplace_back(r, c, to_double(d));
    }
  }

  const auto n = static_cast<Eigen::Index>(safe.size());
  DoubleSparse raw_block(n, n);
  raw_block.setFromTriplets(raw.begin(), raw.end());
  DoubleSparse filtered_block(n, n);
  filtered_block.setFromTriplets(filtered.begin(), filtered.end());

  ResidualReport rep;
  rep.relation_name = opts.name;
  rep.margin = margin;
  rep.tolerance = opts.tolerance;
  rep.raw_residual = operator_norm(raw_block, opts.norm);
  rep.residual = opts.comparison == Comparison::raw ? rep.raw_residual
                                                    : operator_norm(filtered_block, opts.norm);
  rep.passed = rep.residual <= rep.tolerance;
  return rep;
}

}  // namespace qboson
