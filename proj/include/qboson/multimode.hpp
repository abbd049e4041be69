#pragma once

// N-component constructions: independent q-bosons, SU_q(N)-covariant bosons
// obtained by number-operator dressing, the SU(N) R-matrix, and Chevalley
// generators of su_q(N) in the Schwinger realization.
//
// Species are 0-based throughout: "i < j" means species order.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qboson/deformed.hpp"
#include "qboson/densities.hpp"
#include "qboson/fock.hpp"
#include "qboson/phase.hpp"
#include "qboson/residual.hpp"

namespace qboson {

inline std::vector<QBosonFamily> independent_qbosons(std::size_t n_modes,
                                                     const std::vector<real>& q_squared,
                                                     const std::vector<int>& cutoffs) {
  if (n_modes == 0 || q_squared.size() != n_modes || cutoffs.size() != n_modes) {
    throw argument_error("independent_qbosons: need one q^2 and one cutoff per mode");
  }
  const FockSpace space = make_space(cutoffs);
  std::vector<QBosonFamily> out;
  out.reserve(n_modes);
  for (std::size_t m = 0; m < n_modes; ++m) {
    out.push_back(standard_qboson(space, m, QBosonType::I, q_squared[m]));
  }
  return out;
}

struct LadderPair {
  LinearOperator lower;
  LinearOperator raise;
};

enum class DressingSign { automatic, plus, minus };

struct CovariantFamily {
  std::size_t modes = 0;
  real q = 0;  // base; diagonal relations deform by q^2
  std::vector<QBosonFamily> hatted;
  /// q^{s * sum_{k<i} N_k} for each species i.
  std::vector<LinearOperator> dressing;
  std::vector<LadderPair> dressed;
  int dressing_exponent_sign = 1;
  /// Relations verified while choosing the sign.
  std::vector<ResidualReport> checks;

  const FockSpace& space() const { return hatted.front().space(); }
};

inline LinearOperator number_power(const FockSpace& space, real base, real exponent_sign,
                                   std::size_t below_species) {
  ModeSet support;
  for (std::size_t k = 0; k < below_species; ++k) support.push_back(k);
  return LinearOperator::diagonal(
      space,
      [=](const Occupation& occ) {
        int s = 0;
        for (std::size_t k = 0; k < below_species; ++k) s += occ[k];
        return complex(std::pow(base, exponent_sign * static_cast<real>(s)));
      },
      support);
}

inline CovariantFamily dress(std::vector<QBosonFamily> hatted, real q, int sign) {
  CovariantFamily fam;
  fam.modes = hatted.size();
  fam.q = q;
  fam.dressing_exponent_sign = sign;
  const FockSpace& space = hatted.front().space();
  for (std::size_t i = 0; i < hatted.size(); ++i) {
    LinearOperator d = number_power(space, q, static_cast<real>(sign), i);
    fam.dressed.push_back({d * hatted[i].lower, d * hatted[i].raise});
    fam.dressing.push_back(std::move(d));
  }
  fam.hatted = std::move(hatted);
  return fam;
}

/// Diagonal relations B-i B+i - q^2 B+i B-i = q^{2 sum_{k<i} N_k} and the
/// q-commutation relations between species, all at the given margin:
///   B-i B-j = q B-j B-i          (i < j)
///   B+j B+i = q B+i B+j          (i < j, the adjoint of the line above)
///   B-i B+j = q B+j B-i          (i != j)
inline std::vector<ResidualReport> covariance_residuals(const CovariantFamily& fam, int margin = 1,
                                                        double tolerance = 1e-12,
                                                        Norm norm = Norm::spectral) {
  const auto& b = fam.dressed;
  const FockSpace& space = fam.space();
  const real q = fam.q;
  std::vector<ResidualReport> out;
  auto check = [&](const std::string& name, const LinearOperator& l, const LinearOperator& r) {
    out.push_back(relation_residual(l, r, margin, {name, tolerance, norm}));
  };
  for (std::size_t i = 0; i < fam.modes; ++i) {
    check("covariant.diagonal." + std::to_string(i),
          b[i].lower * b[i].raise - (q * q) * (b[i].raise * b[i].lower),
          number_power(space, q * q, 1, i));
  }
  for (std::size_t i = 0; i < fam.modes; ++i) {
    for (std::size_t j = 0; j < fam.modes; ++j) {
      const std::string ij = std::to_string(i) + std::to_string(j);
      if (i < j) {
        check("covariant.lower_lower." + ij, b[i].lower * b[j].lower, q * (b[j].lower * b[i].lower));
        check("covariant.raise_raise." + ij, b[j].raise * b[i].raise, q * (b[i].raise * b[j].raise));
      }
      if (i != j) {
        check("covariant.lower_raise." + ij, b[i].lower * b[j].raise, q * (b[j].raise * b[i].lower));
      }
    }
  }
  return out;
}

/// Undressing with the inverse diagonal factor must return the hatted operators.
inline std::vector<ResidualReport> undressing_residuals(const CovariantFamily& fam,
                                                        double tolerance = 1e-12,
                                                        Norm norm = Norm::spectral) {
  std::vector<ResidualReport> out;
  for (std::size_t i = 0; i < fam.modes; ++i) {
    const LinearOperator inv =
        number_power(fam.space(), fam.q, -static_cast<real>(fam.dressing_exponent_sign), i);
    out.push_back(relation_residual(inv * fam.dressed[i].lower, fam.hatted[i].lower, 0,
                                    {"covariant.undress." + std::to_string(i), tolerance, norm}));
  }
  return out;
}

/// Builds hatted type-I(q^2) bosons and dresses them. With
/// DressingSign::automatic both exponent signs are tried and the one for
/// which every covariance relation holds is kept.
inline CovariantFamily covariant_bosons(std::size_t n_modes, real q, const std::vector<int>& cutoffs,
                                        DressingSign sign = DressingSign::automatic,
                                        double tolerance = 1e-12) {
  if (n_modes < 2) throw argument_error("covariant_bosons: need at least two modes");
  if (!(q > 0 && q < 1)) throw argument_error("covariant_bosons: q must lie in (0, 1)");
  const auto hatted = independent_qbosons(n_modes, std::vector<real>(n_modes, q * q), cutoffs);
  std::vector<int> candidates;
  if (sign != DressingSign::minus) candidates.push_back(1);
  if (sign != DressingSign::plus) candidates.push_back(-1);
  for (int s : candidates) {
    CovariantFamily fam = dress(hatted, q, s);
    fam.checks = covariance_residuals(fam, 1, tolerance);
    bool ok = true;
    for (const auto& c : fam.checks) ok = ok && c.passed;
    if (ok || sign != DressingSign::automatic) return fam;
  }
  throw consistency_error("covariant_bosons: no dressing sign satisfies the covariance relations");
}

struct RMatrix {
  std::size_t n = 0;
  real q = 0;
  /// Row (i,j) -> i*n + j, column (k,l) -> k*n + l: R = R_{ij,kl} e_ik (x) e_jl.
  Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic> entries;

  real at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return entries(static_cast<Eigen::Index>(i * n + j), static_cast<Eigen::Index>(k * n + l));
  }
};

inline RMatrix su_r_matrix(std::size_t n, real q) {
  if (n < 2) throw argument_error("su_r_matrix: n must be >= 2");
  if (!(q > 0)) throw argument_error("su_r_matrix: q must be positive");
  RMatrix r{n, q, Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>::Zero(
                      static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(n * n))};
  const auto idx = [n](std::size_t a, std::size_t b) { return static_cast<Eigen::Index>(a * n + b); };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r.entries(idx(i, j), idx(i, j)) = i == j ? q : 1;
      if (i < j) r.entries(idx(i, j), idx(j, i)) = q - 1 / q;
    }
  }
  return r;
}

using RealMatrix = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;

inline RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Spectral norm of R12 R13 R23 - R23 R13 R12 on (C^n)^{(x)3}.
inline double yang_baxter_residual(const RMatrix& r) {
  const auto n = static_cast<Eigen::Index>(r.n);
  const RealMatrix id = RealMatrix::Identity(n, n);
  const RealMatrix r12 = kron(r.entries, id);
  const RealMatrix r23 = kron(id, r.entries);
  // P23 swaps the second and third tensor factors.
  RealMatrix p23 = RealMatrix::Zero(n * n * n, n * n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      for (Eigen::Index c = 0; c < n; ++c) p23(a * n * n + c * n + b, a * n * n + b * n + c) = 1;
    }
  }
  const RealMatrix r13 = p23 * r12 * p23;
  const RealMatrix diff = r12 * r13 * r23 - r23 * r13 * r12;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff.cast<double>());
  return svd.singularValues()(0);
}

/// Spectral norm of (PR - q)(PR + q^{-1}), P the flip on C^n (x) C^n.
inline double hecke_residual(const RMatrix& r) {
  const auto n = static_cast<Eigen::Index>(r.n);
  RealMatrix flip = RealMatrix::Zero(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) flip(b * n + a, a * n + b) = 1;
  }
  const RealMatrix braid = flip * r.entries;
  const RealMatrix id = RealMatrix::Identity(n * n, n * n);
  const RealMatrix diff = (braid - r.q * id) * (braid + id / r.q);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff.cast<double>());
  return svd.singularValues()(0);
}

/// The three R-matrix (RTT-form) relations of the dressed family:
///   B-i B-j = q^{-1} R_{ij,kl} B-l B-k
///   B+i B+j = q^{-1} R_{lk,ij} B+k B+l
///   B-i B+j = delta_ij + q R_{ki,jl} B+k B-l
inline std::vector<ResidualReport> rtt_residuals(const CovariantFamily& fam, const RMatrix& r,
                                                 int margin = 1, double tolerance = 1e-12,
                                                 Norm norm = Norm::spectral) {
  if (r.n != fam.modes) throw argument_error("rtt_residuals: R-matrix size mismatch");
  const auto& b = fam.dressed;
  const FockSpace& space = fam.space();
  const std::size_t n = fam.modes;
  const real q = fam.q;
  std::vector<ResidualReport> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::string ij = std::to_string(i) + std::to_string(j);
      LinearOperator lower_sum = LinearOperator::zero(space);
      LinearOperator raise_sum = LinearOperator::zero(space);
      LinearOperator mixed_sum = i == j ? LinearOperator::identity(space)
                                        : LinearOperator::zero(space);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          if (const real c = r.at(i, j, k, l); c != 0) {
            lower_sum = lower_sum + (c / q) * (b[l].lower * b[k].lower);
          }
          if (const real c = r.at(l, k, i, j); c != 0) {
            raise_sum = raise_sum + (c / q) * (b[k].raise * b[l].raise);
          }
          if (const real c = r.at(k, i, j, l); c != 0) {
            mixed_sum = mixed_sum + (q * c) * (b[k].raise * b[l].lower);
          }
        }
      }
      out.push_back(relation_residual(b[i].lower * b[j].lower, lower_sum, margin,
                                      {"rtt.lower_lower." + ij, tolerance, norm}));
      out.push_back(relation_residual(b[i].raise * b[j].raise, raise_sum, margin,
                                      {"rtt.raise_raise." + ij, tolerance, norm}));
      out.push_back(relation_residual(b[i].lower * b[j].raise, mixed_sum, margin,
                                      {"rtt.lower_raise." + ij, tolerance, norm}));
    }
  }
  return out;
}

enum class ChevalleyVariant {
  typeI_q2,          // beta(n) = (1 - q^{2n}) / (1 - q^2)
  typeII_symmetric,  // beta(n) = (q^n - q^{-n}) / (q - q^{-1})
};

inline const char* to_string(ChevalleyVariant v) {
  return v == ChevalleyVariant::typeI_q2 ? "typeI_q2" : "typeII_symmetric";
}

struct ChevalleyReport {
  ChevalleyVariant boson_variant = ChevalleyVariant::typeI_q2;
  real bracket_base = 0;
  std::vector<LinearOperator> h, e, f;
  std::vector<ResidualReport> hh_residuals;
  std::vector<ResidualReport> cartan_residuals;    // [H_i, E_j] - A_ij E_j
  std::vector<ResidualReport> cartan_f_residuals;  // [H_i, F_j] + A_ij F_j
  std::vector<ResidualReport> ef_residuals;        // [E_i, F_i] - [H_i]
  std::vector<ResidualReport> ef_offdiag_residuals;  // [E_i, F_j], i != j

  double max_ef_residual() const {
    double m = 0;
    for (const auto& r : ef_residuals) m = std::max(m, r.residual);
    return m;
  }
};

inline int cartan_entry(std::size_t i, std::size_t j) {
  if (i == j) return 2;
  if (i == j + 1 || j == i + 1) return -1;
  return 0;
}

/// The per-mode families a Chevalley variant is built from.
inline std::vector<QBosonFamily> chevalley_families(std::size_t n_modes, real q,
                                                    const std::vector<int>& cutoffs,
                                                    ChevalleyVariant variant) {
  if (cutoffs.size() != n_modes) throw argument_error("chevalley: one cutoff per mode required");
  const FockSpace space = make_space(cutoffs);
  std::vector<QBosonFamily> fams;
  for (std::size_t m = 0; m < n_modes; ++m) {
    fams.push_back(variant == ChevalleyVariant::typeI_q2
                       ? standard_qboson(space, m, QBosonType::I, q * q)
                       // type II with deformation q in place of q^2: beta(n) = [n]_q
                       : standard_qboson(space, m, QBosonType::II, q));
  }
  return fams;
}

/// H_i = N_i - N_{i+1}, E_i = B+i B-(i+1), F_i = B+(i+1) B-i, with residuals of
/// the su_q(N) relations (margin 2 by default). The bracket [x] = (b^x - b^{-x})/(b - b^{-1})
/// uses `bracket_base` (default q).
inline ChevalleyReport chevalley_check(std::size_t n_modes, real q, const std::vector<int>& cutoffs,
                                       ChevalleyVariant variant,
                                       std::optional<real> bracket_base = std::nullopt,
                                       double tolerance = 1e-10, int margin = 2,
                                       Norm norm = Norm::spectral) {
  if (n_modes < 2) throw argument_error("chevalley_check: need at least two modes");
  if (!(q > 0 && q < 1)) throw argument_error("chevalley_check: q must lie in (0, 1)");
  const auto fams = chevalley_families(n_modes, q, cutoffs, variant);
  const FockSpace& space = fams.front().space();
  const real base = bracket_base.value_or(q);

  ChevalleyReport rep;
  rep.boson_variant = variant;
  rep.bracket_base = base;
  for (std::size_t i = 0; i + 1 < n_modes; ++i) {
    rep.h.push_back(fams[i].number - fams[i + 1].number);
    rep.e.push_back(fams[i].raise * fams[i + 1].lower);
    rep.f.push_back(fams[i + 1].raise * fams[i].lower);
  }
  const std::size_t r = rep.h.size();
  const auto name = [](const char* what, std::size_t i, std::size_t j) {
    return std::string("chevalley.") + what + "." + std::to_string(i) + std::to_string(j);
  };
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const auto& h = rep.h[i];
      const real a = static_cast<real>(cartan_entry(i, j));
      rep.hh_residuals.push_back(
          relation_residual(h * rep.h[j], rep.h[j] * h, margin, {name("hh", i, j), tolerance, norm}));
      rep.cartan_residuals.push_back(relation_residual(
          h * rep.e[j], rep.e[j] * h + a * rep.e[j], margin, {name("he", i, j), tolerance, norm}));
      rep.cartan_f_residuals.push_back(relation_residual(
          h * rep.f[j], rep.f[j] * h - a * rep.f[j], margin, {name("hf", i, j), tolerance, norm}));
      if (i != j) {
        rep.ef_offdiag_residuals.push_back(relation_residual(
            rep.e[i] * rep.f[j], rep.f[j] * rep.e[i], margin, {name("ef", i, j), tolerance, norm}));
      }
    }
    const std::size_t lo = i, hi = i + 1;
    const LinearOperator bracket = LinearOperator::diagonal(
        space,
        [=](const Occupation& occ) {
          const real x = static_cast<real>(occ[lo] - occ[hi]);
          return complex((std::pow(base, x) - std::pow(base, -x)) / (base - 1 / base));
        },
        {lo, hi});
    rep.ef_residuals.push_back(relation_residual(rep.e[i] * rep.f[i] - rep.f[i] * rep.e[i],
                                                 bracket, margin, {name("ef", i, i), tolerance, norm}));
  }
  return rep;
}

/// Averaged multimode construction: for species i the a_i mode is thermal,
/// A = (e_{a_i}, e_{a_i}^dagger) and D0 = theta(N_{a_i} - sum_{k<i} N_{b_k}).
/// Each row holds the normalized <D0>/<A- A+> for one b configuration next to
/// the diagonal coefficient q^{2 sum_{k<i} n_{b_k}} it should reproduce.
struct SpeciesRecipeRow {
  Occupation b_occupation;
  real measured = 0;
  real expected = 0;
};

struct SpeciesRecipe {
  std::size_t species = 0;
  real coeff_plus = 0;
  real coeff_minus = 0;
  real tail_mass = 0;
  std::vector<SpeciesRecipeRow> rows;

  real max_relative_deviation() const {
    real m = 0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.measured - r.expected) / r.expected);
    return m;
  }
};

inline std::vector<SpeciesRecipe> multimode_recipe(std::size_t n_modes, real q_squared,
                                                   int a_cutoff, int b_cutoff) {
  if (n_modes < 1) throw argument_error("multimode_recipe: need at least one species");
  if (static_cast<long>(n_modes) * b_cutoff > a_cutoff) {
    throw argument_error("multimode_recipe: a_cutoff must cover the largest b-number sum");
  }
  const auto params = ThermalParams::from_q_squared(q_squared);
  std::vector<SpeciesRecipe> out;
  for (std::size_t i = 0; i < n_modes; ++i) {
    // modes: a_i, then b_0 .. b_i
    std::vector<int> cutoffs{a_cutoff};
    for (std::size_t k = 0; k <= i; ++k) cutoffs.push_back(b_cutoff);
    const FockSpace space = make_space(cutoffs);
    const PhasePair e = phase_pair(space, 0);
    const LinearOperator mm = e.lower * e.raise;
    const LinearOperator pp = e.raise * e.lower;
    ModeSet support{0};
    for (std::size_t k = 0; k < i; ++k) support.push_back(k + 1);
    const LinearOperator d0 = LinearOperator::diagonal(
        space,
        [=](const Occupation& occ) {
          int s = 0;
          for (std::size_t k = 0; k < i; ++k) s += occ[k + 1];
          return complex(occ[0] >= s ? 1 : 0);
        },
        support);

    SpeciesRecipe sr;
    sr.species = i;
    const FockSpace b_space = make_space(std::vector<int>(i + 1, b_cutoff));
    for (std::size_t flat = 0; flat < b_space.dimension(); ++flat) {
      const Occupation b = b_space.occupation(flat);
      Occupation spectators{0};
      spectators.insert(spectators.end(), b.begin(), b.end());
      const DensityOperator rho = thermal_density(space, 0, params, spectators);
      const real plus = expectation(rho, mm).real();
      const real minus = expectation(rho, pp).real();
      if (flat == 0) {
        sr.coeff_plus = plus;
        sr.coeff_minus = minus;
        sr.tail_mass = rho.tail_mass();
      }
      int s = 0;
      for (std::size_t k = 0; k < i; ++k) s += b[k];
      sr.rows.push_back({b, expectation(rho, d0).real() / plus,
                         std::pow(q_squared, static_cast<real>(s))});
    }
    out.push_back(std::move(sr));
  }
  return out;
}

}  // namespace qboson
