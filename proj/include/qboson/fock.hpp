#pragma once

// Truncated multimode Fock spaces and the operators acting on them.
//
// Basis enumeration is row-major over occupation multi-indices with mode 0
// varying slowest: flat = sum_m n_m * stride_m, stride_m = prod_{k>m}(c_k+1).
// Matrix entries are held in extended precision (long double) so that
// identities which hold exactly in the untruncated algebra survive the
// arithmetic of building them at double-precision resolution.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qboson/errors.hpp"

namespace qboson {

using real = long double;
using complex = std::complex<real>;
using SparseMatrix = Eigen::SparseMatrix<complex, Eigen::RowMajor>;
using Vector = Eigen::Matrix<complex, Eigen::Dynamic, 1>;
using Triplet = Eigen::Triplet<complex>;
using Occupation = std::vector<int>;
/// Sorted, duplicate-free list of mode indices.
using ModeSet = std::vector<std::size_t>;

inline constexpr std::size_t default_dimension_limit = 10'000'000;

class FockSpace {
 public:
  explicit FockSpace(std::vector<int> cutoffs,
                     std::size_t dimension_limit = default_dimension_limit)
      : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) throw argument_error("FockSpace: empty cutoff list");
    for (int c : cutoffs_) {
      if (c < 1) throw argument_error("FockSpace: every cutoff must be >= 1");
    }
    std::size_t dim = 1;
    for (int c : cutoffs_) {
      const auto levels = static_cast<std::size_t>(c) + 1;
      if (dim > dimension_limit / levels) {
        throw size_error("FockSpace: dimension exceeds limit of " +
                         std::to_string(dimension_limit));
      }
      dim *= levels;
    }
    if (dim > dimension_limit) {
      throw size_error("FockSpace: dimension exceeds limit of " +
                       std::to_string(dimension_limit));
    }
    dimension_ = dim;
    strides_.assign(cutoffs_.size(), 1);
    for (std::size_t m = cutoffs_.size() - 1; m > 0; --m) {
      strides_[m - 1] = strides_[m] * (static_cast<std::size_t>(cutoffs_[m]) + 1);
    }
  }

  std::size_t mode_count() const { return cutoffs_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  int cutoff(std::size_t mode) const {
    check_mode(mode);
    return cutoffs_[mode];
  }
  int min_cutoff() const { return *std::min_element(cutoffs_.begin(), cutoffs_.end()); }
  std::size_t stride(std::size_t mode) const {
    check_mode(mode);
    return strides_[mode];
  }

  void check_mode(std::size_t mode) const {
    if (mode >= cutoffs_.size()) {
      throw argument_error("mode " + std::to_string(mode) + " out of range for " +
                           std::to_string(cutoffs_.size()) + "-mode space");
    }
  }

  std::size_t index(std::span<const int> occupation) const {
    if (occupation.size() != cutoffs_.size()) {
      throw argument_error("FockSpace::index: occupation length mismatch");
    }
    std::size_t flat = 0;
    for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
      if (occupation[m] < 0 || occupation[m] > cutoffs_[m]) {
        throw argument_error("FockSpace::index: occupation outside truncation");
      }
      flat += static_cast<std::size_t>(occupation[m]) * strides_[m];
    }
    return flat;
  }

  Occupation occupation(std::size_t flat) const {
    Occupation occ(cutoffs_.size());
    for (std::size_t m = 0; m < cutoffs_.size(); ++m) occ[m] = occupation(flat, m);
    return occ;
  }

  int occupation(std::size_t flat, std::size_t mode) const {
    return static_cast<int>((flat / strides_[mode]) %
                            (static_cast<std::size_t>(cutoffs_[mode]) + 1));
  }

  bool operator==(const FockSpace& other) const { return cutoffs_ == other.cutoffs_; }

 private:
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 0;
};

inline FockSpace make_space(std::vector<int> cutoffs,
                            std::size_t dimension_limit = default_dimension_limit) {
  return FockSpace(std::move(cutoffs), dimension_limit);
}

inline ModeSet merge_modes(const ModeSet& a, const ModeSet& b) {
  ModeSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline void require_same_space(const FockSpace& a, const FockSpace& b, const char* what) {
  if (!(a == b)) throw argument_error(std::string(what) + ": operands live on different spaces");
}

class StateVector {
 public:
  StateVector(FockSpace space, Vector amplitudes)
      : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != space_.dimension()) {
      throw argument_error("StateVector: amplitude count does not match space dimension");
    }
  }

  static StateVector basis(const FockSpace& space, std::span<const int> occupation) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    v(static_cast<Eigen::Index>(space.index(occupation))) = complex(1);
    return StateVector(space, std::move(v));
  }

  const FockSpace& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }
  complex amplitude(std::size_t flat) const {
    return amplitudes_(static_cast<Eigen::Index>(flat));
  }

  real norm() const { return amplitudes_.norm(); }
  bool is_normalized(real tol = 1e-12L) const { return std::abs(norm() - 1) <= tol; }
  StateVector normalized() const {
    const real n = norm();
    if (n == 0) throw argument_error("StateVector::normalized: zero vector");
    return StateVector(space_, amplitudes_ / n);
  }

  /// <this|other>
  complex inner(const StateVector& other) const {
    require_same_space(space_, other.space_, "StateVector::inner");
    return amplitudes_.dot(other.amplitudes_);
  }

  friend StateVector operator-(const StateVector& a, const StateVector& b) {
    require_same_space(a.space_, b.space_, "StateVector::operator-");
    return StateVector(a.space_, a.amplitudes_ - b.amplitudes_);
  }
  friend StateVector operator*(complex s, const StateVector& v) {
    return StateVector(v.space_, s * v.amplitudes_);
  }

 private:
  FockSpace space_;
  Vector amplitudes_;
};

/// Immutable operator on a FockSpace. The mode support is a superset of the
/// modes on which the operator acts nontrivially.
class LinearOperator {
 public:
  LinearOperator(FockSpace space, SparseMatrix matrix, ModeSet support)
      : space_(std::move(space)), matrix_(std::move(matrix)), support_(std::move(support)) {
    const auto dim = static_cast<Eigen::Index>(space_.dimension());
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
      throw argument_error("LinearOperator: matrix shape does not match space dimension");
    }
    std::sort(support_.begin(), support_.end());
    support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
    for (auto m : support_) space_.check_mode(m);
    matrix_.makeCompressed();
  }

  static LinearOperator zero(const FockSpace& space) {
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    return LinearOperator(space, SparseMatrix(dim, dim), {});
  }

  static LinearOperator identity(const FockSpace& space) {
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    SparseMatrix m(dim, dim);
    m.setIdentity();
    return LinearOperator(space, std::move(m), {});
  }

  /// Diagonal operator with entries f(occupation); zero entries are not stored.
  static LinearOperator diagonal(const FockSpace& space,
                                 const std::function<complex(const Occupation&)>& f,
                                 ModeSet support) {
    std::vector<Triplet> t;
    t.reserve(space.dimension());
    for (std::size_t i = 0; i < space.dimension(); ++i) {
      const complex v = f(space.occupation(i));
      if (v != complex(0)) {
        t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), v);
      }
    }
    return from_triplets(space, t, std::move(support));
  }

  static LinearOperator from_triplets(const FockSpace& space, const std::vector<Triplet>& t,
                                      ModeSet support) {
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    SparseMatrix m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    return LinearOperator(space, std::move(m), std::move(support));
  }

  /// |a><b| for two states of the same space.
  static LinearOperator outer(const StateVector& a, const StateVector& b) {
    require_same_space(a.space(), b.space(), "LinearOperator::outer");
    const auto& space = a.space();
    std::vector<Triplet> t;
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
      if (a.amplitudes()(i) == complex(0)) continue;
      for (Eigen::Index j = 0; j < b.amplitudes().size(); ++j) {
        const complex v = a.amplitudes()(i) * std::conj(b.amplitudes()(j));
        if (v != complex(0)) t.emplace_back(i, j, v);
      }
    }
    ModeSet all(space.mode_count());
    for (std::size_t m = 0; m < all.size(); ++m) all[m] = m;
    return from_triplets(space, t, std::move(all));
  }

  const FockSpace& space() const { return space_; }
  const SparseMatrix& matrix() const { return matrix_; }
  const ModeSet& mode_support() const { return support_; }
  std::size_t dimension() const { return space_.dimension(); }
  complex coeff(std::size_t row, std::size_t col) const {
    return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  LinearOperator adjoint() const {
    SparseMatrix m = matrix_.adjoint();
    return LinearOperator(space_, std::move(m), support_);
  }

  bool is_hermitian(real tol = 0) const {
    SparseMatrix d = matrix_ - SparseMatrix(matrix_.adjoint());
    for (Eigen::Index k = 0; k < d.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(d, k); it; ++it) {
        if (std::abs(it.value()) > tol) return false;
      }
    }
    return true;
  }

  complex trace() const {
    complex s = 0;
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
        if (it.row() == it.col()) s += it.value();
      }
    }
    return s;
  }

  Eigen::MatrixXcd dense_double() const {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(matrix_.rows(), matrix_.cols());
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
        d(it.row(), it.col()) = std::complex<double>(static_cast<double>(it.value().real()),
                                                     static_cast<double>(it.value().imag()));
      }
    }
    return d;
  }

  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
    require_same_space(a.space_, b.space_, "operator+");
    return LinearOperator(a.space_, a.matrix_ + b.matrix_, merge_modes(a.support_, b.support_));
  }
  friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
    require_same_space(a.space_, b.space_, "operator-");
    return LinearOperator(a.space_, a.matrix_ - b.matrix_, merge_modes(a.support_, b.support_));
  }
  friend LinearOperator operator-(const LinearOperator& a) {
    return LinearOperator(a.space_, -a.matrix_, a.support_);
  }
  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
    require_same_space(a.space_, b.space_, "operator*");
    SparseMatrix m = a.matrix_ * b.matrix_;
    return LinearOperator(a.space_, std::move(m), merge_modes(a.support_, b.support_));
  }
  friend LinearOperator operator*(complex s, const LinearOperator& a) {
    return LinearOperator(a.space_, s * a.matrix_, a.support_);
  }
  friend LinearOperator operator*(real s, const LinearOperator& a) { return complex(s) * a; }

  friend StateVector operator*(const LinearOperator& a, const StateVector& v) {
    require_same_space(a.space_, v.space(), "operator* (state)");
    Vector out = a.matrix_ * v.amplitudes();
    return StateVector(a.space_, std::move(out));
  }

 private:
  FockSpace space_;
  SparseMatrix matrix_;
  ModeSet support_;
};

/// Integer power by repeated multiplication; power 0 is the identity.
inline LinearOperator power(const LinearOperator& x, int k) {
  if (k < 0) throw argument_error("power: negative exponent");
  LinearOperator out = LinearOperator::identity(x.space());
  for (int i = 0; i < k; ++i) out = out * x;
  return out;
}

struct LadderTriple {
  LinearOperator lower;
  LinearOperator raise;
  LinearOperator number;
};

/// Number operator N of one mode.
inline LinearOperator number_operator(const FockSpace& space, std::size_t mode) {
  space.check_mode(mode);
  return LinearOperator::diagonal(
      space, [mode](const Occupation& occ) { return complex(static_cast<real>(occ[mode])); },
      {mode});
}

/// Boson ladder operators of one mode. The raising operator annihilates the
/// cutoff state; there is no wraparound.
inline LadderTriple ladder(const FockSpace& space, std::size_t mode) {
  space.check_mode(mode);
  const std::size_t stride = space.stride(mode);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const int n = space.occupation(i, mode);
    if (n == 0) continue;
    t.emplace_back(static_cast<Eigen::Index>(i - stride), static_cast<Eigen::Index>(i),
                   complex(std::sqrt(static_cast<real>(n))));
  }
  LinearOperator lower = LinearOperator::from_triplets(space, t, {mode});
  LinearOperator raise = lower.adjoint();
  return {std::move(lower), std::move(raise), number_operator(space, mode)};
}

inline LinearOperator commutator(const LinearOperator& x, const LinearOperator& y) {
  require_same_space(x.space(), y.space(), "commutator");
  return x * y - y * x;
}

/// Tr(rho * op) for an arbitrary operator rho on the same space.
inline complex trace_product(const LinearOperator& rho, const LinearOperator& op) {
  require_same_space(rho.space(), op.space(), "expectation");
  const SparseMatrix& r = rho.matrix();
  const SparseMatrix& o = op.matrix();
  complex s = 0;
  // (rho op)_{ii} = sum_j rho_ij op_ji
  for (Eigen::Index i = 0; i < r.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(r, i); it; ++it) {
      const complex v = o.coeff(it.col(), i);
      if (v != complex(0)) s += it.value() * v;
    }
  }
  return s;
}

}  // namespace qboson
