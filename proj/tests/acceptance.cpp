// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qboson.hpp"

using namespace qboson;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << "  [" << detail
            << "]\n";
  return ok;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Criterion 1 ---------------------------------------------------------------

bool thermal_closed_forms() {
  const auto t0 = Clock::now();
  const int c = 80;
  bool ok = true;
  std::string worst_name;
  double worst_excess = 0;
  std::string detail;
  for (real x : {0.25L, 0.5L, 0.8L}) {
    const FockSpace s = make_space({c});
    const auto rho = thermal_density(s, 0, ThermalParams::from_q_squared(x));
    const double tol = std::max(1e-10, std::pow(static_cast<double>(x), c + 1));
    const auto a = ladder(s, 0);
    const auto e = phase_pair(s, 0);
    auto check = [&](const std::string& name, const LinearOperator& op, real want) {
      const double dev = static_cast<double>(std::abs(expectation(rho, op).real() - want));
      if (dev > tol) {
        ok = false;
        if (dev / tol > worst_excess) {
          worst_excess = dev / tol;
          worst_name = name + " at q^2=" + fmt(static_cast<double>(x)) + " dev=" + fmt(dev) +
                       " tol=" + fmt(tol);
        }
      }
    };
    check("<a+a>", a.raise * a.lower, x / (1 - x));
    check("<aa+>", a.lower * a.raise, 1 / (1 - x));
    for (int k = 0; k <= 3; ++k) {
      const real xk = std::pow(x, static_cast<real>(k));
      check("<e+^k e^k>", power(e.raise, k) * power(e.lower, k), xk);
      check("<e^k e+^k>", power(e.lower, k) * power(e.raise, k), 1);
      check("<theta(N-k)>", theta_operator(s, 0, k), xk);
    }
  }
  const double t = seconds_since(t0);
  ok = ok && t < 1;
  detail = ok ? "all within max(1e-10, q^(2(c+1)))" : "worst " + worst_name;
  return report(1, "thermal closed forms at cutoff 80", ok, detail + ", time " + fmt(t) + "s");
}

// Criterion 2 ---------------------------------------------------------------

bool cuntz_exactness() {
  double worst = 0;
  for (int c : {8, 32, 128}) {
    const FockSpace s = make_space({c});
    const auto a = ladder(s, 0);
    const auto e = phase_pair(s, 0);
    const auto one = LinearOperator::identity(s);
    const auto vac = level_projector(s, 0, 0);
    const std::vector<std::pair<LinearOperator, LinearOperator>> rel{
        {commutator(a.lower, a.raise), one},
        {e.lower * e.raise, one},
        {e.raise * e.lower, one - vac},
        {commutator(a.number, e.lower), -e.lower},
        {commutator(a.number, e.raise), e.raise},
        {a.lower, e.lower * sqrt_number(s, 0)},
        {a.raise, sqrt_number(s, 0) * e.raise}};
    for (const auto& [l, r] : rel) worst = std::max(worst, relation_residual(l, r, 1).residual);
  }
  return report(2, "Cuntz and boson relations exact at margin 1", worst == 0,
                "max residual " + fmt(worst));
}

// Criterion 3 ---------------------------------------------------------------

bool coherent_suite() {
  const FockSpace s = make_space({60});
  const auto a = ladder(s, 0);
  double eig = 0, mean = 0, pois = 0;
  for (complex z : {complex(1), complex(2), complex(0, 2)}) {
    const auto st = coherent_state(s, 0, z);
    eig = std::max(eig, static_cast<double>((a.lower * st - z * st).norm()));
    mean = std::max(mean, static_cast<double>(std::abs(st.inner(a.number * st).real() - std::norm(z))));
    const real x = std::norm(z);
    real p = std::exp(-x);  // Poisson weight, updated by x / n
    for (int n = 0; n <= 40; ++n) {
      if (n > 0) p *= x / n;
      pois = std::max(pois, static_cast<double>(std::abs(std::norm(st.amplitude(static_cast<std::size_t>(n))) - p)));
    }
  }
  const bool ok = eig < 1e-8 && mean <= 1e-8 && pois <= 1e-10;
  return report(3, "coherent states at cutoff 60", ok,
                "eigen " + fmt(eig) + " mean " + fmt(mean) + " poisson " + fmt(pois));
}

// Criterion 4 ---------------------------------------------------------------

bool phase_asymptotic_expansion() {
  bool ok = true;
  double prev = INFINITY;
  double route = 0;
  for (real r : {4.0L, 6.0L, 8.0L, 12.0L}) {
    const complex z(r, 0);
    const complex series = phase_expectation_series(z);
    const complex matrix = phase_expectation_matrix(z, 600);
    route = std::max(route, static_cast<double>(std::abs(series - matrix)));
    const complex unit = z / std::abs(z);
    const double corrected = static_cast<double>(std::abs(series - unit * (1 - 1 / (8 * r * r))));
    const double leading = static_cast<double>(std::abs(series - unit));
    ok = ok && corrected < prev && corrected < leading;
    prev = corrected;
  }
  ok = ok && route <= 1e-12;
  return report(4, "phase expectation asymptotics", ok,
                "routes agree to " + fmt(route) + ", last corrected error " + fmt(prev));
}

// Criterion 5 ---------------------------------------------------------------

bool qboson_types() {
  const int c = 8;
  bool ok = true;
  double worst = 0;
  for (real x : {0.25L, 0.5L}) {
    for (auto t : {QBosonType::I, QBosonType::II, QBosonType::III, QBosonType::IV}) {
      const auto fam = standard_qboson(t, x, c);
      worst = std::max(worst, defining_relation_residual(fam, 1).residual);
      std::vector<real> beta(c + 1, 0);
      for (int n = 0; n < c; ++n) {
        real f = 1;
        if (t == QBosonType::II) f = std::pow(x, -static_cast<real>(n));
        if (t == QBosonType::III) f = 1 - x;
        if (t == QBosonType::IV) f = (1 - x) * std::pow(x, -static_cast<real>(n));
        beta[static_cast<std::size_t>(n) + 1] = f + x * beta[static_cast<std::size_t>(n)];
      }
      ok = ok && beta == fam.beta;
    }
  }
  ok = ok && worst < 1e-12;
  return report(5, "q-boson types I-IV", ok,
                "max residual " + fmt(worst) + (ok ? ", beta exact" : ""));
}

// Criterion 6 ---------------------------------------------------------------

bool recipe_reproduction() {
  const real x = 0.5L;
  bool ok = true;
  std::string signs;
  auto spec = [&](AChoice a, D0Choice d, int alpha) {
    RecipeSpec s;
    s.a_choice = a;
    s.d0_choice = d;
    s.alpha = alpha;
    s.q_squared = x;
    s.a_cutoff = 80;
    return expectation_recipe(s);
  };
  auto matches = [&](const EffectiveRelation& rel, real ratio, real rhs) {
    const real tol = rel.tail_tolerance();
    bool good = std::abs(rel.ratio() - ratio) <= tol * ratio;
    for (real v : rel.normalized_rhs()) good = good && std::abs(v - rhs) <= tol * rhs;
    return good;
  };
  ok = ok && matches(spec(AChoice::phase, D0Choice::identity, 0), x, 1);
  ok = ok && matches(spec(AChoice::boson, D0Choice::identity, 0), x, 1 - x);
  for (int alpha : {0, 1, 2}) {
    ok = ok && matches(spec(AChoice::alpha_phase, D0Choice::identity, alpha), x,
                       std::pow(x, -static_cast<real>(alpha)));
  }
  for (int alpha : {1, 2, 3}) {
    const auto rel = spec(AChoice::boson, D0Choice::theta, alpha);
    ok = ok && rel.sign_probe && matches(rel, x, (1 - x) * std::pow(x, static_cast<real>(alpha)));
    signs += (signs.empty() ? "" : ",") + std::to_string(rel.sign_probe ? rel.sign_probe->sign() : 0);
  }
  return report(6, "expectation recipe at cutoff 80", ok, "theta exponent signs " + signs);
}

// Criterion 7 ---------------------------------------------------------------

bool alpha_boson_check() {
  const int c = 32;
  bool ok = true;
  double comm = 0, number = 0;
  for (int alpha : {1, 2, 3}) {
    const FockSpace s = make_space({c});
    const auto b = alpha_boson(s, 0, alpha);
    ok = ok && b.kernel_dimension == alpha + 1;
    // independent count of zero columns of the lowering matrix
    int zero_cols = 0;
    for (int n = 0; n <= c; ++n) {
      if ((b.triple.lower * StateVector::basis(s, std::vector<int>{n})).norm() == 0) ++zero_cols;
    }
    ok = ok && zero_cols == alpha + 1;
    comm = std::max(comm, relation_residual(commutator(b.triple.lower, b.triple.raise),
                                            theta_operator(s, 0, alpha), 2)
                              .residual);
    const auto want = LinearOperator::diagonal(
        s, [alpha](const Occupation& o) { return complex(std::max(o[0] - alpha, 0)); }, {0});
    number = std::max(number, relation_residual(b.triple.raise * b.triple.lower, want, 0).residual);
  }
  ok = ok && comm == 0 && number == 0;
  return report(7, "alpha boson at cutoff 32", ok,
                "commutator " + fmt(comm) + " number action " + fmt(number));
}

// Criterion 8 ---------------------------------------------------------------

bool multimode_covariance() {
  const auto t0 = Clock::now();
  double cov = 0, rtt = 0, ybe = 0;
  for (std::size_t n : {2u, 3u}) {
    for (real q : {0.5L, 0.8L}) {
      const auto fam = covariant_bosons(n, q, std::vector<int>(n, 10));
      for (const auto& r : covariance_residuals(fam, 1)) cov = std::max(cov, r.residual);
      for (const auto& r : undressing_residuals(fam)) cov = std::max(cov, r.residual);
      const auto rm = su_r_matrix(n, q);
      for (const auto& r : rtt_residuals(fam, rm, 1)) rtt = std::max(rtt, r.residual);
      ybe = std::max(ybe, yang_baxter_residual(rm));
    }
  }
  const double t = seconds_since(t0);
  const bool ok = cov == 0 && rtt < 1e-12 && ybe < 1e-12 && t < 10;
  return report(8, "multimode covariance, cutoff 10", ok,
                "covariance " + fmt(cov) + " rtt " + fmt(rtt) + " ybe " + fmt(ybe) + ", time " +
                    fmt(t) + "s");
}

// Criterion 9 ---------------------------------------------------------------

bool chevalley_report() {
  const real q = std::sqrt(0.5L);
  double cartan = 0;
  bool some_exact = false;
  std::string ef;
  for (auto v : {ChevalleyVariant::typeI_q2, ChevalleyVariant::typeII_symmetric}) {
    for (std::size_t n : {2u, 3u}) {
      const auto rep = chevalley_check(n, q, std::vector<int>(n, 10), v, q);
      for (const auto& r : rep.hh_residuals) cartan = std::max(cartan, r.residual);
      for (const auto& r : rep.cartan_residuals) cartan = std::max(cartan, r.residual);
    }
    for (real base : {q, q * q}) {
      const auto rep = chevalley_check(3, q, {10, 10, 10}, v, base);
      const double r = rep.max_ef_residual();
      some_exact = some_exact || r < 1e-10;
      ef += std::string(ef.empty() ? "" : ", ") + to_string(v) + (base == q ? "/q " : "/q^2 ") + fmt(r);
    }
  }
  return report(9, "Chevalley relations", cartan == 0 && some_exact,
                "cartan " + fmt(cartan) + "; [E,F]-[H]: " + ef);
}

// Criterion 10 --------------------------------------------------------------

std::pair<std::string, int> run_cli(const std::string& args) {
  const std::string cmd = std::string(QBOSON_KIT_PATH) + " " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {"", -1};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {out, WIFEXITED(raw) ? WEXITSTATUS(raw) : -1};
}

bool determinism() {
  const auto [a, code_a] = run_cli("run --suite all --format json");
  const auto [b, code_b] = run_cli("run --suite all --format json");
  bool same = false;
  try {
    auto ja = nlohmann::json::parse(a);
    auto jb = nlohmann::json::parse(b);
    ja.erase("wall_time");
    jb.erase("wall_time");
    same = ja == jb;
  } catch (const std::exception&) {
    same = false;
  }
  const bool ok = same && code_a == 0 && code_b == 0;
  return report(10, "run --suite all is deterministic and exits 0", ok,
                std::string(same ? "identical" : "different") + " reports, exit codes " +
                    std::to_string(code_a) + "," + std::to_string(code_b));
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria{
      thermal_closed_forms, cuntz_exactness,     coherent_suite,      phase_asymptotic_expansion,
      qboson_types,         recipe_reproduction, alpha_boson_check,   multimode_covariance,
      chevalley_report,     determinism};
  int failed = 0;
  for (const auto& c : criteria) {
    try {
      if (!c()) ++failed;
    } catch (const std::exception& err) {
      std::cout << "FAIL (exception: " << err.what() << ")\n";
      ++failed;
    }
  }
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAIL") << '\n';
  return failed == 0 ? 0 : 1;
}
