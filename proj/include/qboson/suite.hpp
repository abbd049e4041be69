#pragma once

// Verification suites: each suite builds the relevant operators, measures the
// relations they should satisfy and collects one record per check. Output is
// deterministic apart from the wall_time field.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qboson/deformed.hpp"
#include "qboson/densities.hpp"
#include "qboson/errors.hpp"
#include "qboson/fock.hpp"
#include "qboson/multimode.hpp"
#include "qboson/phase.hpp"
#include "qboson/recipe.hpp"
#include "qboson/residual.hpp"

namespace qboson {

enum class Suite {
  cuntz, thermal, coherent, asymptotics, qboson, recipe, alpha, multimode, rmatrix, chevalley, all
};
enum class ReportFormat { json, csv, text };

inline const std::vector<std::pair<Suite, const char*>>& suite_names() {
  static const std::vector<std::pair<Suite, const char*>> names{
      {Suite::cuntz, "cuntz"},         {Suite::thermal, "thermal"},
      {Suite::coherent, "coherent"},   {Suite::asymptotics, "asymptotics"},
      {Suite::qboson, "qboson"},       {Suite::recipe, "recipe"},
      {Suite::alpha, "alpha"},         {Suite::multimode, "multimode"},
      {Suite::rmatrix, "rmatrix"},     {Suite::chevalley, "chevalley"},
      {Suite::all, "all"}};
  return names;
}

inline const char* to_string(Suite s) {
  for (const auto& [k, v] : suite_names()) {
    if (k == s) return v;
  }
  return "?";
}

inline Suite parse_suite(const std::string& s) {
  for (const auto& [k, v] : suite_names()) {
    if (s == v) return k;
  }
  throw config_error("unknown suite '" + s + "'");
}

inline const char* to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::json: return "json";
    case ReportFormat::csv: return "csv";
    case ReportFormat::text: return "text";
  }
  return "?";
}

inline const char* to_string(Norm n) { return n == Norm::spectral ? "spectral" : "frobenius"; }

/// Default cutoff of each suite when none is given.
inline int default_cutoff(Suite s) {
  switch (s) {
    case Suite::cuntz: return 32;
    case Suite::thermal: return 80;
    case Suite::coherent: return 60;
    case Suite::asymptotics: return 600;
    case Suite::qboson: return 8;
    case Suite::recipe: return 80;
    case Suite::alpha: return 32;
    case Suite::multimode: return 10;
    case Suite::rmatrix: return 0;
    case Suite::chevalley: return 10;
    case Suite::all: return 0;
  }
  return 0;
}

struct SuiteConfig {
  Suite suite = Suite::all;
  std::optional<int> cutoff;
  std::optional<double> q;
  std::optional<double> epsilon0;
  std::optional<double> kT;
  int alpha = 2;
  int modes = 2;
  std::optional<QBosonType> qtype;
  double tolerance = 1e-10;
  std::optional<int> margin;  // nullopt: per-relation automatic margin
  Norm norm = Norm::spectral;
  ReportFormat format = ReportFormat::json;

  static constexpr double default_q = 0.70710678118654752440;

  /// Base q in (0, 1), from --q or from q^2 = exp(-epsilon0 / kT).
  real q_base() const {
    if (epsilon0 || kT) {
      return std::sqrt(ThermalParams::from_energy(*epsilon0, *kT).q_squared());
    }
    return q.value_or(default_q);
  }
  real q_squared() const {
    if (epsilon0 || kT) return ThermalParams::from_energy(*epsilon0, *kT).q_squared();
    const real b = q.value_or(default_q);
    return b * b;
  }
  int cutoff_for(Suite s) const { return cutoff.value_or(default_cutoff(s)); }

  void validate() const {
    if (q && (epsilon0 || kT)) throw config_error("give either --q or --epsilon0/--kT, not both");
    if (static_cast<bool>(epsilon0) != static_cast<bool>(kT)) {
      throw config_error("--epsilon0 and --kT must be given together");
    }
    if (epsilon0 && !(*epsilon0 > 0 && *kT > 0)) {
      throw config_error("--epsilon0 and --kT must be positive");
    }
    if (q && !(*q > 0 && *q < 1)) throw config_error("--q must lie in (0, 1)");
    if (!(tolerance > 0)) throw config_error("--tol must be positive");
    if (alpha < 0) throw config_error("--alpha must be nonnegative");
    if (margin && *margin < 0) throw config_error("--margin must be nonnegative or auto");
    if (cutoff && *cutoff < 1) throw config_error("--cutoff must be >= 1");
    if (suite == Suite::all && cutoff) {
      throw config_error("--cutoff cannot be combined with --suite all (each suite has its own)");
    }
    const bool multi = suite == Suite::multimode || suite == Suite::rmatrix ||
                       suite == Suite::chevalley || suite == Suite::all;
    if (multi && (modes < 2 || modes > 3)) {
      throw config_error(std::string("suite ") + to_string(suite) +
                         " needs --modes 2 or 3 (got " + std::to_string(modes) + ")");
    }
    if (modes < 1) throw config_error("--modes must be positive");
  }
};

struct CheckRecord {
  std::string name;
  /// The relation or closed form the check measures.
  std::string paper_ref;
  std::optional<double> measured;
  std::optional<double> expected;
  double residual = 0;
  /// Absent for measurement-only rows, which always pass.
  std::optional<double> tolerance;
  double tail_mass = 0;
  bool passed = false;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckRecord> checks;
  bool overall_passed = false;
  double wall_time = 0;
};

namespace detail {

class SuiteRun {
 public:
  explicit SuiteRun(const SuiteConfig& cfg) : cfg_(cfg) {}

  std::vector<CheckRecord>& checks() { return checks_; }

  int margin(int automatic) const { return cfg_.margin.value_or(automatic); }

  void relation(const std::string& name, const std::string& ref, const LinearOperator& lhs,
                const LinearOperator& rhs, int automatic_margin,
                std::optional<double> tolerance = std::nullopt) {
    add(name, ref,
        relation_residual(lhs, rhs, margin(automatic_margin),
                          {name, tolerance.value_or(cfg_.tolerance), cfg_.norm}));
  }

  void add(const std::string& name, const std::string& ref, const ResidualReport& r,
           double tail = 0) {
    checks_.push_back({name, ref, r.residual, 0.0, r.residual, r.tolerance, tail, r.passed});
  }

  /// |measured - expected| <= tolerance.
  void scalar(const std::string& name, const std::string& ref, real measured, real expected,
              double tolerance, double tail = 0) {
    const double residual = static_cast<double>(std::abs(measured - expected));
    checks_.push_back({name, ref, static_cast<double>(measured), static_cast<double>(expected),
                       residual, tolerance, tail, residual <= tolerance});
  }

  /// Predicate check with an explicit pass decision.
  void predicate(const std::string& name, const std::string& ref, std::optional<double> measured,
                 std::optional<double> expected, double residual, double tolerance, bool passed,
                 double tail = 0) {
    checks_.push_back({name, ref, measured, expected, residual, tolerance, tail, passed});
  }

  /// Measurement-only row.
  void record(const std::string& name, const std::string& ref, double measured, double residual) {
    checks_.push_back({name, ref, measured, std::nullopt, residual, std::nullopt, 0, true});
  }

  const SuiteConfig& cfg() const { return cfg_; }

 private:
  const SuiteConfig& cfg_;
  std::vector<CheckRecord> checks_;
};

inline std::string tag(const char* prefix, int k) { return std::string(prefix) + std::to_string(k); }

inline std::vector<int> alpha_values(const SuiteConfig& cfg, std::vector<int> base) {
  base.push_back(cfg.alpha);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  return base;
}

inline void run_cuntz(SuiteRun& run) {
  const int c = run.cfg().cutoff_for(Suite::cuntz);
  const FockSpace space = make_space({c});
  const LadderTriple a = ladder(space, 0);
  const PhasePair e = phase_pair(space, 0);
  const LinearOperator one = LinearOperator::identity(space);
  const LinearOperator root = sqrt_number(space, 0);
  run.relation("cuntz.boson.commutator", "[a, a^dagger] = 1", commutator(a.lower, a.raise), one, 1);
  run.relation("cuntz.boson.number_raise", "[N, a^dagger] = a^dagger",
               commutator(a.number, a.raise), a.raise, 1);
  run.relation("cuntz.boson.number_lower", "[N, a] = -a", commutator(a.number, a.lower), -a.lower,
               1);
  run.relation("cuntz.polar.lower", "a = e sqrt(N)", a.lower, e.lower * root, 1);
  run.relation("cuntz.polar.raise", "a^dagger = sqrt(N) e^dagger", a.raise, root * e.raise, 1);
  run.relation("cuntz.phase.e_edag", "e e^dagger = 1", e.lower * e.raise, one, 1);
  run.relation("cuntz.phase.edag_e", "e^dagger e = 1 - |0><0|", e.raise * e.lower,
               one - level_projector(space, 0, 0), 1);
  run.relation("cuntz.phase.number_lower", "[N, e] = -e", commutator(a.number, e.lower), -e.lower,
               1);
  run.relation("cuntz.phase.number_raise", "[N, e^dagger] = e^dagger",
               commutator(a.number, e.raise), e.raise, 1);
}

inline void run_thermal(SuiteRun& run) {
  const int c = run.cfg().cutoff_for(Suite::thermal);
  const real x = run.cfg().q_squared();
  const FockSpace space = make_space({c});
  const DensityOperator rho = thermal_density(space, 0, ThermalParams::from_q_squared(x));
  const double tail = static_cast<double>(rho.tail_mass());
  const double rel = std::max(run.cfg().tolerance, tail);
  const LadderTriple a = ladder(space, 0);
  const PhasePair e = phase_pair(space, 0);
  const auto check = [&](const std::string& name, const std::string& ref, const LinearOperator& op,
                         real expected) {
    run.scalar(name, ref, expectation(rho, op).real(), expected,
               rel * static_cast<double>(expected), tail);
  };
  check("thermal.trace", "Tr rho = 1", LinearOperator::identity(space), 1);
  check("thermal.number", "<a^dagger a> = q^2/(1-q^2)", a.raise * a.lower, x / (1 - x));
  check("thermal.anti_number", "<a a^dagger> = 1/(1-q^2)", a.lower * a.raise, 1 / (1 - x));
  for (int k = 1; k <= 3; ++k) {
    const real xk = std::pow(x, static_cast<real>(k));
    check(tag("thermal.edag_e.alpha_", k), "<e^dagger^alpha e^alpha> = q^(2 alpha)",
          power(e.raise, k) * power(e.lower, k), xk);
    check(tag("thermal.e_edag.alpha_", k), "<e^alpha e^dagger^alpha> = 1",
          power(e.lower, k) * power(e.raise, k), 1);
  }
  for (int k = 0; k <= 3; ++k) {
    check(tag("thermal.theta.alpha_", k), "<theta(N - alpha)> = q^(2 alpha)",
          theta_operator(space, 0, k), std::pow(x, static_cast<real>(k)));
  }
}

inline void run_coherent(SuiteRun& run) {
  const int c = run.cfg().cutoff_for(Suite::coherent);
  if (c < 16) throw config_error("suite coherent needs --cutoff >= 16 (|z|^2 = 4 guard)");
  const FockSpace space = make_space({c});
  const LadderTriple a = ladder(space, 0);
  const std::vector<std::pair<complex, std::string>> zs{
      {complex(1, 0), "1"}, {complex(2, 0), "2"}, {complex(0, 2), "2i"}};
  for (const auto& [z, label] : zs) {
    const StateVector s = coherent_state(space, 0, z);
    const real x = std::norm(z);
    const std::string p = "coherent.z_" + label;
    const real eig = (a.lower * s - z * s).norm();
    run.predicate(p + ".eigen", "a|z> = z|z>", static_cast<double>(eig), 0.0,
                  static_cast<double>(eig), 1e-8, eig < 1e-8L);
    run.scalar(p + ".mean_number", "<z|N|z> = |z|^2", s.inner(a.number * s).real(), x, 1e-8);
    real worst = 0;
    const int top = std::min(40, c - 5);
    for (int n = 0; n <= top; ++n) {
      const real pn = std::norm(s.amplitude(static_cast<std::size_t>(n)));
      const real poisson = std::exp(-x + n * std::log(x) - std::lgamma(static_cast<real>(n + 1)));
      worst = std::max(worst, std::abs(pn - poisson));
    }
    run.predicate(p + ".poisson", "|<n|z>|^2 = exp(-|z|^2) |z|^(2n) / n!",
                  static_cast<double>(worst), 0.0, static_cast<double>(worst), 1e-10,
                  worst <= 1e-10L);
  }
}

inline void run_asymptotics(SuiteRun& run) {
  const int c = run.cfg().cutoff_for(Suite::asymptotics);
  std::vector<complex> zs;
  for (real r : {4.0L, 6.0L, 8.0L, 12.0L}) zs.emplace_back(r, 0);
  std::vector<AsymptoticRow> rows;
  try {
    rows = phase_asymptotics(zs, c);
  } catch (const truncation_error& err) {
    throw config_error(std::string("suite asymptotics: ") + err.what());
  }
  for (const auto& r : rows) {
    const std::string p = tag("asymptotics.z_", static_cast<int>(std::abs(r.z)));
    const real agree = std::abs(r.exact - r.exact_matrix);
    run.predicate(p + ".routes_agree", "series <z|e|z> = matrix <z|e|z>",
                  static_cast<double>(r.exact_matrix.real()), static_cast<double>(r.exact.real()),
                  static_cast<double>(agree), 1e-12, agree <= 1e-12L);
    run.predicate(p + ".correction_improves",
                  "|exact - (z/|z|)(1 - 1/(8|z|^2))| < |exact - z/|z||",
                  static_cast<double>(r.abs_error), static_cast<double>(r.leading_error),
                  static_cast<double>(r.abs_error), static_cast<double>(r.leading_error),
                  r.abs_error < r.leading_error);
  }
  real worst_ratio = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    worst_ratio = std::max(worst_ratio, rows[k].abs_error / rows[k - 1].abs_error);
  }
  run.predicate("asymptotics.error_decreasing", "corrected error strictly decreasing in |z|",
                static_cast<double>(worst_ratio), std::nullopt, static_cast<double>(worst_ratio),
                1.0, worst_ratio < 1);
}

/// Closed forms of beta(n) for the four standard types.
inline real beta_closed_form(QBosonType t, real x, int n) {
  const real xn = std::pow(x, static_cast<real>(n));
  switch (t) {
    case QBosonType::I: return (1 - xn) / (1 - x);
    case QBosonType::III: return 1 - xn;
    case QBosonType::II: return (1 / xn - xn) / (1 / x - x);
    case QBosonType::IV: return (1 - x) * (1 / xn - xn) / (1 / x - x);
    case QBosonType::custom: break;
  }
  return 0;
}

inline void run_qboson(SuiteRun& run) {
  const int c = run.cfg().cutoff_for(Suite::qboson);
  if (c < 2) throw config_error("suite qboson needs --cutoff >= 2");
  const real x = run.cfg().q_squared();
  std::vector<QBosonType> types{QBosonType::I, QBosonType::II, QBosonType::III, QBosonType::IV};
  if (run.cfg().qtype) types = {*run.cfg().qtype};
  for (QBosonType t : types) {
    const std::string p = std::string("qboson.type_") + to_string(t);
    std::optional<QBosonFamily> fam;
    try {
      fam = standard_qboson(t, x, c);
    } catch (const range_error& err) {
      throw config_error(std::string("suite qboson: ") + err.what());
    }
    run.add(p + ".defining_relation", "B- B+ - q^2 B+ B- = f(N)",
            defining_relation_residual(*fam, run.margin(1),
                                       {p + ".defining_relation", run.cfg().tolerance,
                                        run.cfg().norm}));
    real worst = 0;
    for (int n = 0; n <= c; ++n) {
      const real want = beta_closed_form(t, x, n);
      worst = std::max(worst, std::abs(fam->beta[static_cast<std::size_t>(n)] - want) /
                                  std::max(real(1), std::abs(want)));
    }
    run.predicate(p + ".beta_closed_form", "beta(n) closed form", static_cast<double>(worst), 0.0,
                  static_cast<double>(worst), run.cfg().tolerance, worst <= run.cfg().tolerance);
    run.relation(p + ".number_raise", "[N, B+] = B+", commutator(fam->number, fam->raise),
                 fam->raise, 1);
    run.relation(p + ".number_lower", "[N, B-] = -B-", commutator(fam->number, fam->lower),
                 -fam->lower, 1);
  }
}

inline void run_recipe(SuiteRun& run) {
  const SuiteConfig& cfg = run.cfg();
  const real x = cfg.q_squared();
  RecipeSpec base;
  base.q_squared = x;
  base.a_cutoff = cfg.cutoff_for(Suite::recipe);
  base.b_cutoff = 4;
  if (base.a_cutoff < 8) throw config_error("suite recipe needs --cutoff >= 8");

  const auto row = [&](const std::string& p, const std::string& ref, AChoice a, D0Choice d,
                       int alpha) {
    RecipeSpec spec = base;
    spec.a_choice = a;
    spec.d0_choice = d;
    spec.alpha = alpha;
    std::optional<EffectiveRelation> rel;
    try {
      rel = expectation_recipe(spec);
    } catch (const accuracy_error& err) {
      throw config_error(std::string("suite recipe: ") + err.what());
    }
    const auto want = predicted_relation(a, d, alpha, x);
    const double tail = static_cast<double>(rel->tail_mass);
    const double tol = std::max(cfg.tolerance, tail);
    run.scalar(p + ".ratio", "<A+ A->/<A- A+> = q^2", rel->ratio(), want.ratio,
               tol * static_cast<double>(want.ratio), tail);
    real worst = 0;
    for (real v : rel->normalized_rhs()) worst = std::max(worst, std::abs(v - want.rhs));
    run.predicate(p + ".rhs", ref, static_cast<double>(rel->normalized_rhs().front()),
                  static_cast<double>(want.rhs), static_cast<double>(worst),
                  tol * static_cast<double>(want.rhs), worst <= tol * want.rhs, tail);
    const QBosonFamily fam = family_from_relation(*rel);
    run.add(p + ".closure", "solved family satisfies the averaged relation",
            defining_relation_residual(
                fam, run.margin(1),
                {p + ".closure", std::max(1e-12, tail), cfg.norm}),
            tail);
    if (rel->sign_probe) {
      const SignProbe& s = *rel->sign_probe;
      run.predicate(p + ".exponent_sign", "measured sign of the exponent in (1-q^2) q^(+-2 alpha)",
                    s.sign(), std::nullopt, static_cast<double>(std::abs(s.measured -
                                                                         (s.sign() > 0
                                                                              ? s.plus_candidate
                                                                              : s.minus_candidate))),
                    tol, s.sign() != 0, tail);
    }
  };
  row("recipe.phase.identity", "B- B+ - q^2 B+ B- = 1", AChoice::phase, D0Choice::identity, 0);
  row("recipe.boson.identity", "B- B+ - q^2 B+ B- = 1 - q^2", AChoice::boson, D0Choice::identity,
      0);
  for (int k : alpha_values(cfg, {0, 1, 2})) {
    if (k > base.a_cutoff - 2) throw config_error("suite recipe: --alpha too large for cutoff");
    row(tag("recipe.alpha_phase_", k) + ".identity", "B- B+ - q^2 B+ B- = q^(-2 alpha)",
        AChoice::alpha_phase, D0Choice::identity, k);
  }
  for (int k : alpha_values(cfg, {1, 2})) {
    if (k == 0) continue;
    row(tag("recipe.boson.theta_", k), "B- B+ - q^2 B+ B- = (1-q^2) q^(2 alpha)", AChoice::boson,
        D0Choice::theta, k);
  }
}

inline void run_alpha(SuiteRun& run) {
  const int c = run.cfg().cutoff_for(Suite::alpha);
  const FockSpace space = make_space({c});
  const PhasePair e = phase_pair(space, 0);
  for (int k : alpha_values(run.cfg(), {1, 2, 3})) {
    if (k == 0) continue;
    if (k > c - 2) throw config_error("suite alpha: alpha must lie in [1, cutoff - 2]");
    const std::string p = tag("alpha.alpha_", k);
    const AlphaBoson b = alpha_boson(space, 0, k);
    run.predicate(p + ".kernel_dimension", "dim ker a(alpha) = alpha + 1", b.kernel_dimension,
                  k + 1, std::abs(b.kernel_dimension - (k + 1)), 0, b.kernel_dimension == k + 1);
    run.relation(p + ".commutator", "[a(alpha), a^dagger(alpha)] = theta(N - alpha)",
                 commutator(b.triple.lower, b.triple.raise), theta_operator(space, 0, k), 2);
    // N(alpha)|n + alpha> = n|n + alpha>, and zero on the alpha-fold shifted vacuum.
    run.relation(p + ".number_action", "N(alpha)|n + alpha> = n|n + alpha>", b.triple.number,
                 LinearOperator::diagonal(
                     space, [k](const Occupation& occ) { return complex(std::max(occ[0] - k, 0)); },
                     {0}),
                 1, 0.0);
    const PhasePair ea = alpha_phase_pair(space, 0, k);
    run.relation(p + ".phase_defect", "e(alpha) e^dagger(alpha) - e^dagger(alpha) e(alpha) = |alpha><alpha|",
                 ea.lower * ea.raise - ea.raise * ea.lower, level_projector(space, 0, k), 1);
    run.relation(p + ".theta_conjugate", "e^dagger^alpha theta(N - alpha) e^alpha = theta(N - 2 alpha)",
                 alpha_adjoint(space, 0, theta_operator(space, 0, k), k),
                 2 * k <= c ? theta_operator(space, 0, 2 * k) : LinearOperator::zero(space), 0);
    run.relation(p + ".theta_untwist", "e^alpha theta(N - alpha) e^dagger^alpha = 1",
                 power(e.lower, k) * theta_operator(space, 0, k) * power(e.raise, k),
                 LinearOperator::identity(space), k);
  }
}

inline std::string two_digit(std::size_t i, std::size_t j) {
  return std::to_string(i) + std::to_string(j);
}

inline void run_multimode(SuiteRun& run) {
  const SuiteConfig& cfg = run.cfg();
  const auto n = static_cast<std::size_t>(cfg.modes);
  const int c = cfg.cutoff_for(Suite::multimode);
  if (c < 2) throw config_error("suite multimode needs --cutoff >= 2");
  const real q = cfg.q_base();
  const std::vector<int> cutoffs(n, c);

  const auto indep = independent_qbosons(n, std::vector<real>(n, q * q), cutoffs);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = "multimode.independent.relation." + std::to_string(i);
    run.add(name, "B-i B+i - q^2 B+i B-i = 1",
            defining_relation_residual(indep[i], run.margin(1), {name, cfg.tolerance, cfg.norm}));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      run.relation("multimode.independent.cross." + two_digit(i, j), "[B-i, B+j] = 0 (i != j)",
                   commutator(indep[i].lower, indep[j].raise), LinearOperator::zero(indep[i].space()),
                   0);
    }
  }

  const CovariantFamily fam = covariant_bosons(n, q, cutoffs);
  run.record("multimode.dressing_sign", "sign s in B~ = q^(s sum_{k<i} N_k) B^",
             fam.dressing_exponent_sign, 0);
  const auto prefixed = [&](const std::vector<ResidualReport>& reps, const char* ref) {
    for (const auto& r : reps) run.add("multimode." + r.relation_name, ref, r);
  };
  prefixed(covariance_residuals(fam, run.margin(1), cfg.tolerance, cfg.norm),
           "covariant q-boson relations");
  prefixed(rtt_residuals(fam, su_r_matrix(n, q), run.margin(1), std::min(cfg.tolerance, 1e-12),
                         cfg.norm),
           "RTT form with the SU(N) R-matrix");
  prefixed(undressing_residuals(fam, cfg.tolerance, cfg.norm), "q^(-s sum N) B~ = B^");

  const real x = q * q;
  const auto species = multimode_recipe(n, x, 80, 4);
  for (const auto& s : species) {
    const double tail = static_cast<double>(s.tail_mass);
    const double tol = std::max(cfg.tolerance, tail);
    const real dev = s.max_relative_deviation();
    const std::string p = "multimode.recipe.species_" + std::to_string(s.species);
    run.predicate(p + ".rhs", "<theta(N_a - sum_{k<i} N_bk)>/<e e^dagger> = q^(2 sum N_bk)",
                  static_cast<double>(dev), 0.0, static_cast<double>(dev), tol, dev <= tol, tail);
    run.scalar(p + ".ratio", "<e^dagger e>/<e e^dagger> = q^2", s.coeff_minus / s.coeff_plus, x,
               tol * static_cast<double>(x), tail);
  }
}

inline void run_rmatrix(SuiteRun& run) {
  const SuiteConfig& cfg = run.cfg();
  const auto n = static_cast<std::size_t>(cfg.modes);
  const RMatrix r = su_r_matrix(n, cfg.q_base());
  const double ybe = yang_baxter_residual(r);
  run.predicate("rmatrix.yang_baxter", "R12 R13 R23 = R23 R13 R12", ybe, 0.0, ybe, 1e-12,
                ybe <= 1e-12);
  const double hecke = hecke_residual(r);
  run.predicate("rmatrix.hecke", "(PR - q)(PR + 1/q) = 0", hecke, 0.0, hecke, 1e-12,
                hecke <= 1e-12);
}

inline void run_chevalley(SuiteRun& run) {
  const SuiteConfig& cfg = run.cfg();
  const auto n = static_cast<std::size_t>(cfg.modes);
  const int c = cfg.cutoff_for(Suite::chevalley);
  const int m = run.margin(2);
  if (m >= c) throw config_error("suite chevalley: margin must be below the cutoff");
  const real q = cfg.q_base();
  const std::vector<int> cutoffs(n, c);
  double best = std::numeric_limits<double>::infinity();
  for (ChevalleyVariant v : {ChevalleyVariant::typeI_q2, ChevalleyVariant::typeII_symmetric}) {
    const std::string vp = std::string("chevalley.") + to_string(v);
    const std::pair<real, const char*> bases[] = {{q, "q"}, {q * q, "q2"}};
    for (const auto& [b, label] : bases) {
      const auto rep = chevalley_check(n, q, cutoffs, v, b, cfg.tolerance, m, cfg.norm);
      const std::string bp = vp + ".base_" + label;
      if (std::string(label) == "q") {
        for (const auto* group : {&rep.hh_residuals, &rep.cartan_residuals,
                                  &rep.cartan_f_residuals, &rep.ef_offdiag_residuals}) {
          for (const auto& r : *group) {
            run.add(vp + "." + r.relation_name.substr(std::string("chevalley.").size()),
                    "su_q(N) Cartan relations", r);
          }
        }
      }
      for (const auto& r : rep.ef_residuals) {
        run.record(bp + "." + r.relation_name.substr(std::string("chevalley.").size()),
                   "[E_i, F_i] - [H_i] (measured)", r.residual, r.residual);
      }
      best = std::min(best, rep.max_ef_residual());
    }
  }
  run.predicate("chevalley.ef.some_combination_exact",
                "[E_i, F_i] = [H_i] for at least one (variant, base)", best, 0.0, best,
                cfg.tolerance, best <= cfg.tolerance);
}

inline void run_one(SuiteRun& run, Suite s) {
  switch (s) {
    case Suite::cuntz: run_cuntz(run); break;
    case Suite::thermal: run_thermal(run); break;
    case Suite::coherent: run_coherent(run); break;
    case Suite::asymptotics: run_asymptotics(run); break;
    case Suite::qboson: run_qboson(run); break;
    case Suite::recipe: run_recipe(run); break;
    case Suite::alpha: run_alpha(run); break;
    case Suite::multimode: run_multimode(run); break;
    case Suite::rmatrix: run_rmatrix(run); break;
    case Suite::chevalley: run_chevalley(run); break;
    case Suite::all:
      for (const auto& [k, name] : suite_names()) {
        if (k != Suite::all) run_one(run, k);
      }
      break;
  }
}

}  // namespace detail

/// Runs the configured suite. Invalid configurations raise config_error.
inline SuiteReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  detail::SuiteRun run(cfg);
  try {
    detail::run_one(run, cfg.suite);
  } catch (const argument_error& err) {
    throw config_error(err.what());
  }
  SuiteReport rep;
  rep.config = cfg;
  rep.checks = std::move(run.checks());
  std::stable_sort(rep.checks.begin(), rep.checks.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  rep.overall_passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                                   [](const CheckRecord& c) { return c.passed; });
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline nlohmann::ordered_json config_json(const SuiteConfig& cfg) {
  nlohmann::ordered_json j;
  j["suite"] = to_string(cfg.suite);
  j["q"] = static_cast<double>(cfg.q_base());
  j["q_squared"] = static_cast<double>(cfg.q_squared());
  j["epsilon0"] = cfg.epsilon0 ? nlohmann::ordered_json(*cfg.epsilon0) : nullptr;
  j["kT"] = cfg.kT ? nlohmann::ordered_json(*cfg.kT) : nullptr;
  j["cutoff"] = cfg.cutoff ? nlohmann::ordered_json(*cfg.cutoff) : nlohmann::ordered_json("default");
  j["alpha"] = cfg.alpha;
  j["modes"] = cfg.modes;
  j["qtype"] = cfg.qtype ? nlohmann::ordered_json(to_string(*cfg.qtype)) : nullptr;
  j["tolerance"] = cfg.tolerance;
  j["margin"] = cfg.margin ? nlohmann::ordered_json(*cfg.margin) : nlohmann::ordered_json("auto");
  j["norm"] = to_string(cfg.norm);
  j["format"] = to_string(cfg.format);
  return j;
}

inline nlohmann::ordered_json report_json(const SuiteReport& rep) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["suite"] = to_string(rep.config.suite);
  j["config"] = config_json(rep.config);
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"paper_ref", c.paper_ref},
                           {"measured", opt(c.measured)},
                           {"expected", opt(c.expected)},
                           {"residual", c.residual},
                           {"tolerance", opt(c.tolerance)},
                           {"tail_mass", c.tail_mass},
                           {"passed", c.passed}});
  }
  j["overall_passed"] = rep.overall_passed;
  j["wall_time"] = rep.wall_time;
  return j;
}

inline std::string format_number(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(17);
  os << *v;
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline void write_report(std::ostream& os, const SuiteReport& rep) {
  switch (rep.config.format) {
    case ReportFormat::json:
      os << report_json(rep).dump(2) << '\n';
      break;
    case ReportFormat::csv:
      os << "name,paper_ref,measured,expected,residual,tolerance,tail_mass,passed\n";
      for (const auto& c : rep.checks) {
        os << csv_field(c.name) << ',' << csv_field(c.paper_ref) << ','
           << format_number(c.measured) << ',' << format_number(c.expected) << ','
           << format_number(c.residual) << ',' << format_number(c.tolerance) << ','
           << format_number(c.tail_mass) << ',' << (c.passed ? "true" : "false") << '\n';
      }
      break;
    case ReportFormat::text:
      for (const auto& c : rep.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << "  residual=" << format_number(c.residual);
        if (c.tolerance) os << " tol=" << format_number(c.tolerance);
        os << "  (" << c.paper_ref << ")\n";
      }
      os << (rep.overall_passed ? "OVERALL PASS" : "OVERALL FAIL") << "  checks=" << rep.checks.size()
         << " wall_time=" << rep.wall_time << "s\n";
      break;
  }
}

}  // namespace qboson
