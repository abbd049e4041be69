#pragma once

// Exponential phase (shift) operators, step-function projectors and the
// alpha-adjoint transformation x -> e^{dagger alpha} x e^{alpha}.

#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <vector>

#include "qboson/fock.hpp"

namespace qboson {

struct PhasePair {
  LinearOperator lower;  // e|n> = |n-1>, e|0> = 0
  LinearOperator raise;  // e^dagger|n> = |n+1>, zero on the cutoff state
  std::size_t mode;
};

inline PhasePair phase_pair(const FockSpace& space, std::size_t mode) {
  space.check_mode(mode);
  const std::size_t stride = space.stride(mode);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    if (space.occupation(i, mode) == 0) continue;
    t.emplace_back(static_cast<Eigen::Index>(i - stride), static_cast<Eigen::Index>(i),
                   complex(1));
  }
  LinearOperator lower = LinearOperator::from_triplets(space, t, {mode});
  LinearOperator raise = lower.adjoint();
  return {std::move(lower), std::move(raise), mode};
}

/// Principal square root of the number operator.
inline LinearOperator sqrt_number(const FockSpace& space, std::size_t mode) {
  space.check_mode(mode);
  return LinearOperator::diagonal(
      space,
      [mode](const Occupation& occ) { return complex(std::sqrt(static_cast<real>(occ[mode]))); },
      {mode});
}

/// Projector onto occupation `level` of one mode (identity on the others).
inline LinearOperator level_projector(const FockSpace& space, std::size_t mode, int level) {
  space.check_mode(mode);
  return LinearOperator::diagonal(
      space, [=](const Occupation& occ) { return complex(occ[mode] == level ? 1 : 0); }, {mode});
}

/// theta(N - alpha) with theta(0) = 1: projector onto n >= alpha.
inline LinearOperator theta_operator(const FockSpace& space, std::size_t mode, int alpha) {
  if (alpha < 0 || alpha > space.cutoff(mode)) {
    throw argument_error("theta_operator: alpha must lie in [0, cutoff]");
  }
  return LinearOperator::diagonal(
      space, [=](const Occupation& occ) { return complex(occ[mode] >= alpha ? 1 : 0); }, {mode});
}

/// e^{dagger alpha} x e^{alpha}. Not a similarity transformation in the
/// invertible sense: e^alpha has an alpha-dimensional kernel.
inline LinearOperator alpha_adjoint(const FockSpace& space, std::size_t mode,
                                    const LinearOperator& x, int alpha) {
  if (alpha < 0 || alpha > space.cutoff(mode)) {
    throw argument_error("alpha_adjoint: alpha must lie in [0, cutoff]");
  }
  require_same_space(space, x.space(), "alpha_adjoint");
  if (alpha == 0) return x;
  const PhasePair e = phase_pair(space, mode);
  return power(e.raise, alpha) * x * power(e.lower, alpha);
}

/// (e(alpha), e^dagger(alpha)) obtained by alpha-adjoining the phase pair.
inline PhasePair alpha_phase_pair(const FockSpace& space, std::size_t mode, int alpha) {
  const PhasePair e = phase_pair(space, mode);
  return {alpha_adjoint(space, mode, e.lower, alpha), alpha_adjoint(space, mode, e.raise, alpha),
          mode};
}

struct AlphaBoson {
  LadderTriple triple;
  int alpha = 0;
  /// Null-space dimension of the lowering operator on the margin-2 safe
  /// states of its mode (spectator modes in their vacuum).
  int kernel_dimension = 0;
};

inline int mode_kernel_dimension(const LinearOperator& lower, std::size_t mode, int margin) {
  const FockSpace& space = lower.space();
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    bool spectators_empty = true;
    for (std::size_t m = 0; m < space.mode_count(); ++m) {
      if (m != mode && space.occupation(i, m) != 0) spectators_empty = false;
    }
    if (spectators_empty && space.occupation(i, mode) <= space.cutoff(mode) - margin) {
      cols.push_back(static_cast<Eigen::Index>(i));
    }
  }
  const Eigen::MatrixXcd full = lower.dense_double();
  Eigen::MatrixXcd block(full.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    block.col(static_cast<Eigen::Index>(c)) = full.col(cols[c]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > 1e-12) ++rank;
  }
  return static_cast<int>(cols.size()) - rank;
}

/// a(alpha) = e^{dagger alpha} a e^{alpha}: a(alpha)|n> = sqrt(n - alpha)|n-1>
/// for n > alpha and zero otherwise; N(alpha) = a^dagger(alpha) a(alpha).
inline AlphaBoson alpha_boson(const FockSpace& space, std::size_t mode, int alpha) {
  if (alpha < 0 || alpha > space.cutoff(mode) - 2) {
    throw argument_error("alpha_boson: alpha must lie in [0, cutoff - 2]");
  }
  const LadderTriple a = ladder(space, mode);
  LinearOperator lower = alpha_adjoint(space, mode, a.lower, alpha);
  LinearOperator raise = alpha_adjoint(space, mode, a.raise, alpha);
  LinearOperator number = raise * lower;
  AlphaBoson out{{std::move(lower), std::move(raise), std::move(number)}, alpha, 0};
  out.kernel_dimension = mode_kernel_dimension(out.triple.lower, mode, 2);
  return out;
}

}  // namespace qboson
