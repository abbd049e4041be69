#pragma once

// Density operators (mixtures, pure, thermal, coherent) and the coherent-state
// phase expectation with its large-amplitude asymptotics.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qboson/fock.hpp"
#include "qboson/phase.hpp"

namespace qboson {

enum class DensityKind { mixture, pure, thermal, coherent };

inline const char* to_string(DensityKind k) {
  switch (k) {
    case DensityKind::mixture: return "mixture";
    case DensityKind::pure: return "pure";
    case DensityKind::thermal: return "thermal";
    case DensityKind::coherent: return "coherent";
  }
  return "?";
}

/// Unit-trace Hermitian operator plus the probability weight the truncation
/// discarded before renormalization.
class DensityOperator {
 public:
  DensityOperator(LinearOperator op, real tail_mass, DensityKind kind)
      : op_(std::move(op)), tail_mass_(tail_mass), kind_(kind) {
    if (tail_mass_ < 0) throw argument_error("DensityOperator: negative tail mass");
    if (std::abs(op_.trace() - complex(1)) > 1e-12L) {
      throw argument_error("DensityOperator: trace differs from 1");
    }
    if (!op_.is_hermitian(1e-14L)) throw argument_error("DensityOperator: not Hermitian");
  }

  const LinearOperator& op() const { return op_; }
  const FockSpace& space() const { return op_.space(); }
  real tail_mass() const { return tail_mass_; }
  DensityKind kind() const { return kind_; }

 private:
  LinearOperator op_;
  real tail_mass_;
  DensityKind kind_;
};

inline complex expectation(const DensityOperator& rho, const LinearOperator& op) {
  return trace_product(rho.op(), op);
}

/// Smallest eigenvalue (dense, double precision).
inline double min_eigenvalue(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.op().dense_double(),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

class ThermalParams {
 public:
  static ThermalParams from_q_squared(real q_squared) {
    if (!(q_squared > 0 && q_squared < 1)) {
      throw argument_error("ThermalParams: q^2 must lie in (0, 1)");
    }
    return ThermalParams(q_squared, std::nullopt, std::nullopt);
  }

  /// q^2 = exp(-epsilon0 / kT)
  static ThermalParams from_energy(real epsilon0, real kT) {
    if (!(epsilon0 > 0) || !(kT > 0)) {
      throw argument_error("ThermalParams: epsilon0 and kT must be positive");
    }
    return ThermalParams(std::exp(-epsilon0 / kT), epsilon0, kT);
  }

  real q_squared() const { return q_squared_; }
  std::optional<real> epsilon0() const { return epsilon0_; }
  std::optional<real> kT() const { return kT_; }

 private:
  ThermalParams(real q2, std::optional<real> e, std::optional<real> t)
      : q_squared_(q2), epsilon0_(e), kT_(t) {}
  real q_squared_;
  std::optional<real> epsilon0_;
  std::optional<real> kT_;
};

inline DensityOperator mixture_density(const std::vector<StateVector>& states,
                                       const std::vector<real>& probs) {
  if (states.empty() || states.size() != probs.size()) {
    throw argument_error("mixture_density: states and probabilities must have equal nonzero length");
  }
  real total = 0;
  for (real p : probs) {
    if (p < 0) throw argument_error("mixture_density: negative probability");
    total += p;
  }
  if (std::abs(total - 1) > 1e-10L) {
    throw argument_error("mixture_density: probabilities sum to " +
                         std::to_string(static_cast<double>(total)) + ", not 1");
  }
  LinearOperator rho = LinearOperator::zero(states.front().space());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (!states[k].is_normalized()) throw argument_error("mixture_density: unnormalized state");
    rho = rho + probs[k] * LinearOperator::outer(states[k], states[k]);
  }
  // Renormalize away the <=1e-10 slack permitted in the probability sum.
  rho = (1 / rho.trace().real()) * rho;
  return DensityOperator(std::move(rho), 0,
                         states.size() == 1 ? DensityKind::pure : DensityKind::mixture);
}

inline DensityOperator pure_density(const StateVector& state) {
  return mixture_density({state}, {1});
}

inline DensityOperator number_state_density(const FockSpace& space,
                                            std::span<const int> occupation) {
  return pure_density(StateVector::basis(space, occupation));
}

/// Tensor product of truncated geometric distributions (1 - q_m^2) q_m^{2 n_m},
/// one factor per mode, renormalized to unit trace.
inline DensityOperator thermal_density(const FockSpace& space,
                                       const std::vector<ThermalParams>& per_mode) {
  if (per_mode.size() != space.mode_count()) {
    throw argument_error("thermal_density: need one parameter set per mode");
  }
  real kept = 1;
  for (std::size_t m = 0; m < per_mode.size(); ++m) {
    kept *= 1 - std::pow(per_mode[m].q_squared(), static_cast<real>(space.cutoffs()[m] + 1));
  }
  ModeSet all(space.mode_count());
  for (std::size_t m = 0; m < all.size(); ++m) all[m] = m;
  LinearOperator rho = LinearOperator::diagonal(
      space,
      [&](const Occupation& occ) {
        real w = 1;
        for (std::size_t m = 0; m < occ.size(); ++m) {
          const real x = per_mode[m].q_squared();
          w *= (1 - x) * std::pow(x, static_cast<real>(occ[m]));
        }
        return complex(w / kept);
      },
      all);
  return DensityOperator(std::move(rho), 1 - kept, DensityKind::thermal);
}

/// Thermal distribution on one mode with every other mode held in the pure
/// number state given by `spectators` (all vacuum when omitted).
inline DensityOperator thermal_density(const FockSpace& space, std::size_t mode,
                                       const ThermalParams& params,
                                       std::optional<Occupation> spectators = std::nullopt) {
  space.check_mode(mode);
  Occupation fixed = spectators.value_or(Occupation(space.mode_count(), 0));
  if (fixed.size() != space.mode_count()) {
    throw argument_error("thermal_density: spectator occupation length mismatch");
  }
  const real x = params.q_squared();
  const int cutoff = space.cutoff(mode);
  const real tail = std::pow(x, static_cast<real>(cutoff + 1));
  std::vector<Triplet> t;
  for (int n = 0; n <= cutoff; ++n) {
    fixed[mode] = n;
    const auto i = static_cast<Eigen::Index>(space.index(fixed));
    t.emplace_back(i, i, complex((1 - x) * std::pow(x, static_cast<real>(n)) / (1 - tail)));
  }
  ModeSet all(space.mode_count());
  for (std::size_t m = 0; m < all.size(); ++m) all[m] = m;
  return DensityOperator(LinearOperator::from_triplets(space, t, all), tail,
                         DensityKind::thermal);
}

struct CoherentOptions {
  /// Require |z|^2 <= guard_fraction * cutoff.
  bool enforce_guard = true;
  real guard_fraction = 0.25L;
};

/// Truncated, renormalized e^{-|z|^2/2} sum_n z^n / sqrt(n!) |n> on one mode.
inline StateVector coherent_state(const FockSpace& space, std::size_t mode, complex z,
                                  const CoherentOptions& opts = {},
                                  std::optional<Occupation> spectators = std::nullopt) {
  const int cutoff = space.cutoff(mode);
  const real x = std::norm(z);
  if (opts.enforce_guard && x > opts.guard_fraction * static_cast<real>(cutoff)) {
    throw truncation_error("coherent_state: |z|^2 = " + std::to_string(static_cast<double>(x)) +
                           " exceeds the truncation guard for cutoff " + std::to_string(cutoff));
  }
  Occupation fixed = spectators.value_or(Occupation(space.mode_count(), 0));
  if (fixed.size() != space.mode_count()) {
    throw argument_error("coherent_state: spectator occupation length mismatch");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  complex c = std::exp(-x / 2);
  for (int n = 0; n <= cutoff; ++n) {
    fixed[mode] = n;
    v(static_cast<Eigen::Index>(space.index(fixed))) = c;
    c *= z / std::sqrt(static_cast<real>(n + 1));
  }
  return StateVector(space, std::move(v)).normalized();
}

inline DensityOperator coherent_density(const StateVector& state) {
  const DensityOperator p = pure_density(state);
  return DensityOperator(p.op(), 0, DensityKind::coherent);
}

/// <z|e|z> by direct summation of z e^{-|z|^2} sum_n |z|^{2n} / sqrt((n+1)! n!),
/// stopping once past the peak and the term falls below 1e-16 of the sum.
inline complex phase_expectation_series(complex z) {
  const real x = std::norm(z);
  if (x == 0) return 0;
  const real log_x = std::log(x);
  real sum = 0;
  for (long n = 0;; ++n) {
    const real nn = static_cast<real>(n);
    const real log_term = nn * log_x - x - (std::lgamma(nn + 2) + std::lgamma(nn + 1)) / 2;
    const real term = std::exp(log_term);
    sum += term;
    if (nn > x && term <= 1e-16L * sum) break;
  }
  return z * sum;
}

/// <z|e|z> as a matrix expectation on a single truncated mode.
inline complex phase_expectation_matrix(complex z, int cutoff) {
  const FockSpace space = make_space({cutoff});
  const StateVector s = coherent_state(space, 0, z);
  return s.inner(phase_pair(space, 0).lower * s);
}

struct AsymptoticRow {
  complex z;
  complex exact;         // series route
  complex exact_matrix;  // matrix route
  complex leading;       // z/|z|
  complex first_correction;  // (z/|z|)(1 - 1/(8|z|^2))
  real abs_error;            // |exact - first_correction|
  real leading_error;        // |exact - leading|
};

inline std::vector<AsymptoticRow> phase_asymptotics(const std::vector<complex>& z_values,
                                                    int cutoff) {
  std::vector<AsymptoticRow> rows;
  for (const complex z : z_values) {
    const real x = std::norm(z);
    if (x < 1) throw argument_error("phase_asymptotics: rows require |z|^2 >= 1");
    if (x > static_cast<real>(cutoff) / 4) {
      throw truncation_error("phase_asymptotics: cutoff " + std::to_string(cutoff) +
                             " too small for |z|^2 = " + std::to_string(static_cast<double>(x)));
    }
    AsymptoticRow r;
    r.z = z;
    r.exact = phase_expectation_series(z);
    r.exact_matrix = phase_expectation_matrix(z, cutoff);
    r.leading = z / std::abs(z);
    r.first_correction = r.leading * (1 - 1 / (8 * x));
    r.abs_error = std::abs(r.exact - r.first_correction);
    r.leading_error = std::abs(r.exact - r.leading);
    rows.push_back(r);
  }
  return rows;
}

inline void write_asymptotics_csv(std::ostream& os, const std::vector<AsymptoticRow>& rows) {
  const auto old_precision = os.precision(17);
  os << "z_re,z_im,exact_re,exact_im,leading_re,leading_im,corr_re,corr_im,abs_err\n";
  for (const auto& r : rows) {
    os << static_cast<double>(r.z.real()) << ',' << static_cast<double>(r.z.imag()) << ','
       << static_cast<double>(r.exact.real()) << ',' << static_cast<double>(r.exact.imag()) << ','
       << static_cast<double>(r.leading.real()) << ',' << static_cast<double>(r.leading.imag())
       << ',' << static_cast<double>(r.first_correction.real()) << ','
       << static_cast<double>(r.first_correction.imag()) << ','
       << static_cast<double>(r.abs_error) << '\n';
  }
  os.precision(old_precision);
}

}  // namespace qboson
