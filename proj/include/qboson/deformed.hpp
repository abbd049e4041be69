#pragma once

// Deformed oscillators B- B+ - q^2 B+ B- = f(N) built from their magnitude
// sequence beta(n) = eigenvalue of B+ B- on |n>.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qboson/fock.hpp"
#include "qboson/residual.hpp"

namespace qboson {

enum class QBosonType { I, II, III, IV, custom };

inline const char* to_string(QBosonType t) {
  switch (t) {
    case QBosonType::I: return "I";
    case QBosonType::II: return "II";
    case QBosonType::III: return "III";
    case QBosonType::IV: return "IV";
    case QBosonType::custom: return "custom";
  }
  return "?";
}

inline QBosonType parse_qboson_type(const std::string& s) {
  if (s == "I") return QBosonType::I;
  if (s == "II") return QBosonType::II;
  if (s == "III") return QBosonType::III;
  if (s == "IV") return QBosonType::IV;
  throw argument_error("unknown q-boson type '" + s + "' (expected I, II, III or IV)");
}

struct QBosonFamily {
  LinearOperator lower;
  LinearOperator raise;
  LinearOperator number;
  std::size_t mode = 0;
  real q_squared = 0;
  QBosonType type = QBosonType::custom;
  /// beta[n], n = 0..cutoff; beta[0] = 0.
  std::vector<real> beta;
  /// Right-hand side f(n) of the defining relation, n = 0..cutoff.
  std::vector<real> relation_rhs;

  const FockSpace& space() const { return lower.space(); }
};

/// Weighted shift lower|..n..> = sqrt(beta[n]) |..n-1..> on one mode.
inline LinearOperator weighted_lowering(const FockSpace& space, std::size_t mode,
                                        const std::vector<real>& beta) {
  space.check_mode(mode);
  if (beta.size() != static_cast<std::size_t>(space.cutoff(mode)) + 1) {
    throw argument_error("weighted_lowering: beta length must be cutoff + 1");
  }
  const std::size_t stride = space.stride(mode);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const int n = space.occupation(i, mode);
    if (n == 0 || beta[static_cast<std::size_t>(n)] == 0) continue;
    t.emplace_back(static_cast<Eigen::Index>(i - stride), static_cast<Eigen::Index>(i),
                   complex(std::sqrt(beta[static_cast<std::size_t>(n)])));
  }
  return LinearOperator::from_triplets(space, t, {mode});
}

/// Solves beta(n+1) = rhs(n) + q^2 beta(n), beta(0) = 0, and builds the family
/// realizing B- B+ - q^2 B+ B- = rhs(N) below the cutoff. q^2 = 1 gives the
/// undeformed case.
inline QBosonFamily solve_deformed_oscillator(const FockSpace& space, std::size_t mode,
                                              real q_squared,
                                              const std::function<real(int)>& rhs,
                                              QBosonType type = QBosonType::custom) {
  if (!(q_squared > 0 && q_squared <= 1)) {
    throw argument_error("solve_deformed_oscillator: q^2 must lie in (0, 1]");
  }
  const int cutoff = space.cutoff(mode);
  std::vector<real> f(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= cutoff; ++n) {
    const real v = rhs(n);
    if (!std::isfinite(v)) throw range_error("solve_deformed_oscillator: rhs not finite");
    if (v < 0) {
      throw argument_error("solve_deformed_oscillator: rhs(" + std::to_string(n) +
                           ") is negative");
    }
    f[static_cast<std::size_t>(n)] = v;
  }
  std::vector<real> beta(f.size(), 0);
  for (std::size_t n = 0; n + 1 < beta.size(); ++n) beta[n + 1] = f[n] + q_squared * beta[n];

  LinearOperator lower = weighted_lowering(space, mode, beta);
  LinearOperator raise = lower.adjoint();
  return {std::move(lower), std::move(raise), number_operator(space, mode), mode, q_squared,
          type,            std::move(beta),  std::move(f)};
}

inline QBosonFamily solve_deformed_oscillator(real q_squared, const std::function<real(int)>& rhs,
                                              int cutoff) {
  return solve_deformed_oscillator(make_space({cutoff}), 0, q_squared, rhs);
}

inline constexpr real overflow_guard = 1e300L;

/// Right-hand side of the four standard relations as a function of n.
inline std::function<real(int)> standard_rhs(QBosonType type, real q_squared) {
  switch (type) {
    case QBosonType::I: return [](int) { return real(1); };
    case QBosonType::III: return [=](int) { return 1 - q_squared; };
    case QBosonType::II:
      return [=](int n) { return std::pow(q_squared, -static_cast<real>(n)); };
    case QBosonType::IV:
      return [=](int n) { return (1 - q_squared) * std::pow(q_squared, -static_cast<real>(n)); };
    case QBosonType::custom: break;
  }
  throw argument_error("standard_rhs: custom type has no standard right-hand side");
}

inline QBosonFamily standard_qboson(const FockSpace& space, std::size_t mode, QBosonType type,
                                    real q_squared) {
  if (type == QBosonType::custom) throw argument_error("standard_qboson: type must be I-IV");
  if (!(q_squared > 0 && q_squared < 1)) {
    throw argument_error("standard_qboson: q^2 must lie in (0, 1)");
  }
  if (type == QBosonType::II || type == QBosonType::IV) {
    const int cutoff = space.cutoff(mode);
    // beta grows like q^{-2n} / (q^{-2} - q^2); guard both.
    const real growth = std::pow(q_squared, -static_cast<real>(cutoff));
    if (!(growth < overflow_guard) || !(growth / (1 - q_squared * q_squared) < overflow_guard)) {
      throw range_error("standard_qboson: q^{-2 cutoff} exceeds the overflow guard");
    }
  }
  return solve_deformed_oscillator(space, mode, q_squared, standard_rhs(type, q_squared), type);
}

inline QBosonFamily standard_qboson(QBosonType type, real q_squared, int cutoff) {
  return standard_qboson(make_space({cutoff}), 0, type, q_squared);
}

/// lower raise - q^2 raise lower against rhs(N) on the margin-safe subspace.
inline ResidualReport defining_relation_residual(const QBosonFamily& fam, int margin = 1,
                                                 ResidualOptions opts = {}) {
  const auto& f = fam.relation_rhs;
  const std::size_t mode = fam.mode;
  LinearOperator lhs = fam.lower * fam.raise - fam.q_squared * (fam.raise * fam.lower);
  LinearOperator rhs = LinearOperator::diagonal(
      fam.space(),
      [&](const Occupation& occ) { return complex(f[static_cast<std::size_t>(occ[mode])]); },
      {mode});
  if (opts.name == ResidualOptions{}.name) {
    opts.name = std::string("qboson.type_") + to_string(fam.type) + ".defining_relation";
  }
  return relation_residual(lhs, rhs, margin, opts);
}

}  // namespace qboson
