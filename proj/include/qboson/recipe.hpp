#pragma once

// Two-mode expectation recipe. Generators D± = A± B± with A on mode a and B on
// mode b obey
//     A- A+ B- B+ - A+ A- B+ B- = D0,
// and averaging the a-mode against a density operator while holding the
// b-mode in a number state leaves a deformed relation for B:
//     B- B+ - (<A+A->/<A-A+>) B+ B- = <D0>/<A-A+>.
// Every coefficient is a trace of an actual two-mode matrix.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qboson/deformed.hpp"
#include "qboson/densities.hpp"
#include "qboson/fock.hpp"
#include "qboson/phase.hpp"

namespace qboson {

enum class AChoice { phase, boson, alpha_phase };
enum class D0Choice { identity, theta };

inline const char* to_string(AChoice a) {
  switch (a) {
    case AChoice::phase: return "phase";
    case AChoice::boson: return "boson";
    case AChoice::alpha_phase: return "alpha_phase";
  }
  return "?";
}

inline const char* to_string(D0Choice d) {
  return d == D0Choice::identity ? "identity" : "theta";
}

struct RecipeDensity {
  enum class Kind { thermal, number_state };
  Kind kind = Kind::thermal;
  int n_a = 0;  // occupation of the a-mode for Kind::number_state

  static RecipeDensity thermal() { return {}; }
  static RecipeDensity number_state(int n) { return {Kind::number_state, n}; }
};

struct RecipeSpec {
  AChoice a_choice = AChoice::phase;
  D0Choice d0_choice = D0Choice::identity;
  int alpha = 0;
  real q_squared = 0.5L;
  int a_cutoff = 80;
  int b_cutoff = 4;
  RecipeDensity density{};
  /// Largest tolerated truncation tail of the thermal a-mode distribution.
  real accuracy_limit = 1e-6L;
};

/// Which exponent sign of (1 - q^2) q^{±2 alpha} the measured theta-case
/// right-hand side reproduces.
struct SignProbe {
  real measured = 0;
  real plus_candidate = 0;
  real minus_candidate = 0;
  bool plus_matches = false;
  bool minus_matches = false;

  /// +1 or -1 when exactly one candidate matches, 0 otherwise.
  int sign() const {
    if (plus_matches == minus_matches) return 0;
    return plus_matches ? 1 : -1;
  }
};

struct EffectiveRelation {
  RecipeSpec spec;
  real coeff_plus = 0;   // <A- A+>
  real coeff_minus = 0;  // <A+ A->
  /// <D0> with the b-mode in |n_b>, n_b = 0..b_cutoff.
  std::vector<real> rhs;
  real tail_mass = 0;
  std::optional<SignProbe> sign_probe;

  real ratio() const { return coeff_minus / coeff_plus; }
  std::vector<real> normalized_rhs() const {
    std::vector<real> out(rhs.size());
    for (std::size_t n = 0; n < rhs.size(); ++n) out[n] = rhs[n] / coeff_plus;
    return out;
  }
  /// Relative tolerance for comparisons against closed forms.
  real tail_tolerance() const { return std::max(real(1e-10L), tail_mass); }
};

struct RecipeOperators {
  FockSpace space;
  LinearOperator a_lower, a_raise;  // A-, A+
  LinearOperator b_lower, b_raise;  // undeformed candidates B-, B+
  LinearOperator d_lower, d_raise;  // D- = A- B-, D+ = A+ B+
  LinearOperator d0;
};

/// Builds the two-mode operators of a recipe row. Mode 0 is a, mode 1 is b.
inline RecipeOperators recipe_operators(const RecipeSpec& spec) {
  const FockSpace space = make_space({spec.a_cutoff, spec.b_cutoff});
  if (spec.alpha < 0 || spec.alpha > spec.a_cutoff - 2) {
    throw argument_error("expectation_recipe: alpha must lie in [0, a_cutoff - 2]");
  }
  std::optional<LinearOperator> am, ap;
  switch (spec.a_choice) {
    case AChoice::phase: {
      auto e = phase_pair(space, 0);
      am = e.lower;
      ap = e.raise;
      break;
    }
    case AChoice::boson: {
      auto a = ladder(space, 0);
      am = a.lower;
      ap = a.raise;
      break;
    }
    case AChoice::alpha_phase: {
      auto e = alpha_phase_pair(space, 0, spec.alpha);
      am = e.lower;
      ap = e.raise;
      break;
    }
  }
  // Algebraic solutions for B: a bosonic b when A is a shift, a shift when A
  // is a boson.
  std::optional<LinearOperator> bm, bp;
  if (spec.a_choice == AChoice::boson) {
    auto e = phase_pair(space, 1);
    bm = e.lower;
    bp = e.raise;
  } else {
    auto b = ladder(space, 1);
    bm = b.lower;
    bp = b.raise;
  }
  LinearOperator d0 = spec.d0_choice == D0Choice::identity
                          ? LinearOperator::identity(space)
                          : theta_operator(space, 0, spec.alpha);
  LinearOperator dm = *am * *bm;
  LinearOperator dp = *ap * *bp;
  return {space, *am, *ap, *bm, *bp, std::move(dm), std::move(dp), std::move(d0)};
}

inline EffectiveRelation expectation_recipe(const RecipeSpec& spec) {
  if (!(spec.q_squared > 0 && spec.q_squared < 1)) {
    throw argument_error("expectation_recipe: q^2 must lie in (0, 1)");
  }
  const RecipeOperators ops = recipe_operators(spec);
  const LinearOperator mm = ops.a_lower * ops.a_raise;  // A- A+
  const LinearOperator pp = ops.a_raise * ops.a_lower;  // A+ A-
  const auto params = ThermalParams::from_q_squared(spec.q_squared);

  EffectiveRelation rel;
  rel.spec = spec;
  for (int nb = 0; nb <= spec.b_cutoff; ++nb) {
    std::optional<DensityOperator> rho;
    if (spec.density.kind == RecipeDensity::Kind::thermal) {
      rho = thermal_density(ops.space, 0, params, Occupation{0, nb});
      if (rho->tail_mass() > spec.accuracy_limit) {
        throw accuracy_error("expectation_recipe: thermal tail mass " +
                             std::to_string(static_cast<double>(rho->tail_mass())) +
                             " exceeds accuracy limit at a_cutoff " +
                             std::to_string(spec.a_cutoff));
      }
    } else {
      rho = number_state_density(ops.space, Occupation{spec.density.n_a, nb});
    }
    const real plus = expectation(*rho, mm).real();
    const real minus = expectation(*rho, pp).real();
    if (nb == 0) {
      rel.coeff_plus = plus;
      rel.coeff_minus = minus;
      rel.tail_mass = rho->tail_mass();
    } else if (std::abs(plus - rel.coeff_plus) > 1e-15L * std::abs(rel.coeff_plus) ||
               std::abs(minus - rel.coeff_minus) > 1e-15L * std::abs(rel.coeff_plus)) {
      throw consistency_error("expectation_recipe: a-mode coefficients depend on the b state");
    }
    rel.rhs.push_back(expectation(*rho, ops.d0).real());
  }
  if (rel.coeff_plus <= 0) {
    throw consistency_error("expectation_recipe: <A- A+> vanishes for this density");
  }

  if (spec.d0_choice == D0Choice::theta && spec.density.kind == RecipeDensity::Kind::thermal) {
    SignProbe p;
    const real x = spec.q_squared;
    p.measured = rel.normalized_rhs().front();
    p.plus_candidate = (1 - x) * std::pow(x, static_cast<real>(spec.alpha));
    p.minus_candidate = (1 - x) * std::pow(x, -static_cast<real>(spec.alpha));
    const real tol = rel.tail_tolerance();
    p.plus_matches = std::abs(p.measured - p.plus_candidate) <= tol * p.plus_candidate;
    p.minus_matches = std::abs(p.measured - p.minus_candidate) <= tol * p.minus_candidate;
    rel.sign_probe = p;
  }
  return rel;
}

/// Closed-form thermal prediction of the normalized relation, used as the
/// assertion the matrix computation is compared against.
struct PredictedRelation {
  real ratio = 0;
  real rhs = 0;
  QBosonType type = QBosonType::custom;
};

inline PredictedRelation predicted_relation(AChoice a, D0Choice d0, int alpha, real q_squared) {
  const real x = q_squared;
  const real xa = std::pow(x, static_cast<real>(alpha));
  real a_mm = 1;  // <A- A+>
  switch (a) {
    case AChoice::phase: a_mm = 1; break;
    case AChoice::boson: a_mm = 1 / (1 - x); break;
    case AChoice::alpha_phase: a_mm = xa; break;
  }
  const real d0_mean = d0 == D0Choice::identity ? 1 : xa;
  PredictedRelation p{x, d0_mean / a_mm, QBosonType::custom};
  if (d0 == D0Choice::identity) {
    if (a == AChoice::phase) p.type = QBosonType::I;
    if (a == AChoice::boson) p.type = QBosonType::III;
    if (a == AChoice::alpha_phase) p.type = QBosonType::II;
  } else if (a == AChoice::boson) {
    p.type = QBosonType::IV;
  }
  return p;
}

/// b-mode family realizing the normalized effective relation.
inline QBosonFamily family_from_relation(const EffectiveRelation& rel) {
  const auto f = rel.normalized_rhs();
  const auto predicted =
      predicted_relation(rel.spec.a_choice, rel.spec.d0_choice, rel.spec.alpha, rel.spec.q_squared);
  return solve_deformed_oscillator(
      make_space({rel.spec.b_cutoff}), 0, rel.ratio(),
      [&](int n) { return f[static_cast<std::size_t>(n)]; }, predicted.type);
}

}  // namespace qboson
