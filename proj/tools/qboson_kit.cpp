// qboson-kit: command-line front end for the verification suites.
//
//   qboson-kit run --suite <name> [--q <v> | --epsilon0 <v> --kT <v>] [--cutoff <n>]
//                  [--alpha <n>] [--modes <n>] [--qtype I|II|III|IV] [--tol <v>]
//                  [--margin <n|auto>] [--norm spectral|frobenius]
//                  [--format json|csv|text] [--out <path>]
//   qboson-kit dump-operator --op <name> --cutoffs <c1,...> [--mode <m>] ...
//   qboson-kit asymptotics [--z <re[,im]> ...] [--cutoff <n>] [--out <path>]
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on a
// configuration error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qboson.hpp"

namespace {

int parse_margin(const std::string& s) {
  if (s == "auto") return -1;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw qboson::config_error("--margin expects an integer or 'auto', got '" + s + "'");
  }
  if (used != s.size() || v < 0) {
    throw qboson::config_error("--margin expects a nonnegative integer or 'auto', got '" + s + "'");
  }
  return v;
}

/// Writes to --out when given, otherwise to standard output.
template <typename Fn>
void emit(const std::string& out, Fn&& write) {
  if (out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(out);
  if (!f) throw qboson::config_error("cannot open output file '" + out + "'");
  write(f);
}

qboson::LinearOperator named_operator(const std::string& op, const qboson::FockSpace& space,
                                      std::size_t mode, int alpha, double q_squared,
                                      const std::string& qtype) {
  using namespace qboson;
  if (op == "lower") return ladder(space, mode).lower;
  if (op == "raise") return ladder(space, mode).raise;
  if (op == "number") return number_operator(space, mode);
  if (op == "phase-lower") return phase_pair(space, mode).lower;
  if (op == "phase-raise") return phase_pair(space, mode).raise;
  if (op == "theta") return theta_operator(space, mode, alpha);
  if (op == "alpha-lower") return alpha_boson(space, mode, alpha).triple.lower;
  if (op == "alpha-raise") return alpha_boson(space, mode, alpha).triple.raise;
  if (op == "qboson-lower") {
    return standard_qboson(space, mode, parse_qboson_type(qtype), q_squared).lower;
  }
  if (op == "qboson-raise") {
    return standard_qboson(space, mode, parse_qboson_type(qtype), q_squared).raise;
  }
  throw config_error("unknown operator '" + op + "'");
}

std::vector<int> parse_cutoffs(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw qboson::config_error("--cutoffs expects comma-separated integers, got '" + s + "'");
    }
  }
  if (out.empty()) throw qboson::config_error("--cutoffs must not be empty");
  return out;
}

qboson::complex parse_z(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stold(s), 0};
    return {std::stold(s.substr(0, comma)), std::stold(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw qboson::config_error("--z expects 're' or 're,im', got '" + s + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Fock-space verification of q-boson constructions"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a verification suite and print its report");
  std::string suite = "all", margin = "auto", norm = "spectral", format = "json", out, qtype;
  qboson::SuiteConfig cfg;
  double q = 0, eps = 0, kt = 0;
  int cutoff = 0;
  run->add_option("--suite", suite, "cuntz|thermal|coherent|asymptotics|qboson|recipe|alpha|"
                                    "multimode|rmatrix|chevalley|all")
      ->required();
  auto* q_opt = run->add_option("--q", q, "Deformation base q in (0,1)");
  auto* e_opt = run->add_option("--epsilon0", eps, "Quantal energy (with --kT)");
  auto* t_opt = run->add_option("--kT", kt, "Temperature times Boltzmann constant");
  auto* c_opt = run->add_option("--cutoff", cutoff, "Per-mode cutoff (suite default otherwise)");
  run->add_option("--alpha", cfg.alpha, "Integer shift alpha")->capture_default_str();
  run->add_option("--modes", cfg.modes, "Number of modes for multimode suites")
      ->capture_default_str();
  run->add_option("--qtype", qtype, "Restrict the qboson suite to one type")
      ->check(CLI::IsMember({"I", "II", "III", "IV"}));
  run->add_option("--tol", cfg.tolerance, "Residual tolerance")->capture_default_str();
  run->add_option("--margin", margin, "Safe-subspace margin or 'auto'")->capture_default_str();
  run->add_option("--norm", norm, "spectral|frobenius")
      ->check(CLI::IsMember({"spectral", "frobenius"}))
      ->capture_default_str();
  run->add_option("--format", format, "json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  run->add_option("--out", out, "Write the report here instead of standard output");

  // dump-operator
  auto* dump = app.add_subcommand("dump-operator", "Print an operator in the text dump format");
  std::string op = "lower", cutoffs = "8", dump_out, dump_qtype = "I";
  std::size_t mode = 0;
  int dump_alpha = 1, rmatrix_n = 2;
  double dump_q2 = 0.5, rmatrix_q = 0.5;
  dump->add_option("--op", op,
                   "lower|raise|number|phase-lower|phase-raise|theta|alpha-lower|alpha-raise|"
                   "qboson-lower|qboson-raise|rmatrix")
      ->capture_default_str();
  dump->add_option("--cutoffs", cutoffs, "Comma-separated per-mode cutoffs")->capture_default_str();
  dump->add_option("--mode", mode, "0-based mode index")->capture_default_str();
  dump->add_option("--alpha", dump_alpha, "Shift for theta/alpha operators")->capture_default_str();
  dump->add_option("--q2", dump_q2, "q^2 for qboson operators")->capture_default_str();
  dump->add_option("--qtype", dump_qtype, "I|II|III|IV")
      ->check(CLI::IsMember({"I", "II", "III", "IV"}))
      ->capture_default_str();
  dump->add_option("--n", rmatrix_n, "R-matrix size")->capture_default_str();
  dump->add_option("--q", rmatrix_q, "R-matrix q")->capture_default_str();
  dump->add_option("--out", dump_out, "Output path");

  // asymptotics
  auto* asym = app.add_subcommand("asymptotics", "Phase-operator expectation versus its expansion");
  std::vector<std::string> zs{"4", "6", "8", "12"};
  int asym_cutoff = 600;
  std::string asym_out;
  asym->add_option("--z", zs, "Amplitudes as 're' or 're,im'")->capture_default_str();
  asym->add_option("--cutoff", asym_cutoff, "Single-mode cutoff")->capture_default_str();
  asym->add_option("--out", asym_out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      cfg.suite = qboson::parse_suite(suite);
      if (*q_opt) cfg.q = q;
      if (*e_opt) cfg.epsilon0 = eps;
      if (*t_opt) cfg.kT = kt;
      if (*c_opt) cfg.cutoff = cutoff;
      if (!qtype.empty()) cfg.qtype = qboson::parse_qboson_type(qtype);
      if (const int m = parse_margin(margin); m >= 0) cfg.margin = m;
      cfg.norm = norm == "frobenius" ? qboson::Norm::frobenius : qboson::Norm::spectral;
      cfg.format = format == "csv"    ? qboson::ReportFormat::csv
                   : format == "text" ? qboson::ReportFormat::text
                                      : qboson::ReportFormat::json;
      const qboson::SuiteReport rep = qboson::run_suite(cfg);
      emit(out, [&](std::ostream& os) { qboson::write_report(os, rep); });
      return rep.overall_passed ? 0 : 1;
    }
    if (*dump) {
      if (op == "rmatrix") {
        const auto r = qboson::su_r_matrix(static_cast<std::size_t>(rmatrix_n), rmatrix_q);
        emit(dump_out, [&](std::ostream& os) { qboson::dump_rmatrix(os, r); });
        return 0;
      }
      const qboson::FockSpace space = qboson::make_space(parse_cutoffs(cutoffs));
      const auto x = named_operator(op, space, mode, dump_alpha, dump_q2, dump_qtype);
      emit(dump_out, [&](std::ostream& os) { qboson::dump_operator(os, x); });
      return 0;
    }
    if (*asym) {
      std::vector<qboson::complex> values;
      for (const auto& z : zs) values.push_back(parse_z(z));
      const auto rows = qboson::phase_asymptotics(values, asym_cutoff);
      emit(asym_out, [&](std::ostream& os) { qboson::write_asymptotics_csv(os, rows); });
      return 0;
    }
  } catch (const qboson::config_error& err) {
    std::cerr << "configuration error: " << err.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "configuration error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 2;
}
