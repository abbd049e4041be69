#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "qboson/densities.hpp"
#include "qboson/phase.hpp"
#include "qboson/residual.hpp"

using namespace qboson;
using Catch::Matchers::WithinAbs;

namespace {
StateVector ket(const FockSpace& s, int n) { return StateVector::basis(s, std::vector<int>{n}); }
double amp(const StateVector& v, int n) {
  return static_cast<double>(v.amplitude(static_cast<std::size_t>(n)).real());
}
}  // namespace

TEST_CASE("phase pair shifts", "[phase]") {
  const FockSpace s = make_space({6});
  const PhasePair e = phase_pair(s, 0);
  CHECK(amp(e.lower * ket(s, 3), 2) == 1);
  CHECK((e.lower * ket(s, 0)).norm() == 0);
  CHECK((e.raise * ket(s, 6)).norm() == 0);
  CHECK(((e.raise * e.lower) * ket(s, 0)).norm() == 0);
  CHECK(relation_residual(e.raise * e.lower,
                          LinearOperator::identity(s) - level_projector(s, 0, 0), 0)
            .residual == 0);
  CHECK_THROWS_AS(phase_pair(s, 2), argument_error);
}

TEST_CASE("oracle: shift matrices on several modes", "[phase][oracle]") {
  const std::vector<int> c{3, 2, 4};
  const FockSpace s = make_space(c);
  for (std::size_t m = 0; m < 3; ++m) {
    const PhasePair e = phase_pair(s, m);
    CHECK(oracle::max_abs_diff(e.lower, oracle::shift_down(c, m), c) == 0);
    CHECK(oracle::max_abs_diff(e.raise, oracle::shift_up(c, m), c) == 0);
  }
}

TEST_CASE("Cuntz and boson relations are exact at margin 1", "[phase]") {
  for (int c : {8, 32, 128}) {
    const FockSpace s = make_space({c});
    const auto a = ladder(s, 0);
    const auto e = phase_pair(s, 0);
    const auto one = LinearOperator::identity(s);
    CHECK(relation_residual(commutator(a.lower, a.raise), one, 1).residual == 0);
    CHECK(relation_residual(commutator(a.number, a.raise), a.raise, 1).residual == 0);
    CHECK(relation_residual(e.lower * e.raise, one, 1).residual == 0);
    CHECK(relation_residual(e.raise * e.lower, one - level_projector(s, 0, 0), 1).residual == 0);
    CHECK(relation_residual(commutator(a.number, e.lower), -e.lower, 1).residual == 0);
    CHECK(relation_residual(commutator(a.number, e.raise), e.raise, 1).residual == 0);
    // e e^dagger fails only on the cutoff state.
    CHECK(relation_residual(e.lower * e.raise, one, 0).residual == 1);
  }
}

TEST_CASE("property: polar decomposition on the full truncated space", "[phase][property]") {
  oracle::Gen gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = gen.cutoffs(3, 6);
    const FockSpace s = make_space(c);
    const std::size_t m = static_cast<std::size_t>(gen.integer(0, static_cast<int>(c.size()) - 1));
    const auto a = ladder(s, m);
    const auto e = phase_pair(s, m);
    const auto root = sqrt_number(s, m);
    CHECK(relation_residual(a.lower, e.lower * root, 0).residual == 0);
    CHECK(relation_residual(a.raise, root * e.raise, 0).residual == 0);
  }
}

TEST_CASE("theta operator", "[phase]") {
  const FockSpace s = make_space({6});
  const auto th = theta_operator(s, 0, 2);
  CHECK((th * ket(s, 1)).norm() == 0);
  CHECK(amp(th * ket(s, 2), 2) == 1);
  CHECK(relation_residual(theta_operator(s, 0, 0), LinearOperator::identity(s), 0).residual == 0);
  CHECK_THROWS_AS(theta_operator(s, 0, 7), argument_error);
  CHECK_THROWS_AS(theta_operator(s, 0, -1), argument_error);

  const FockSpace big = make_space({80});
  const auto rho = thermal_density(big, 0, ThermalParams::from_q_squared(0.5L));
  CHECK_THAT(static_cast<double>(expectation(rho, theta_operator(big, 0, 3)).real()),
             WithinAbs(0.125, 1e-15));
}

TEST_CASE("alpha-adjoint transformation", "[phase]") {
  const FockSpace s = make_space({10});
  const auto e = phase_pair(s, 0);
  CHECK(relation_residual(alpha_adjoint(s, 0, e.lower, 0), e.lower, 0).residual == 0);

  // e^dagger^2 e e^2 maps |n> -> |n-1> for n >= 3 and kills n <= 2.
  const auto x = alpha_adjoint(s, 0, e.lower, 2);
  for (int n = 0; n <= 10; ++n) {
    const auto out = x * ket(s, n);
    if (n >= 3) {
      CHECK(amp(out, n - 1) == 1);
      CHECK(out.norm() == 1);
    } else {
      CHECK(out.norm() == 0);
    }
  }
  CHECK_THROWS_AS(alpha_adjoint(s, 0, e.lower, 11), argument_error);
}

TEST_CASE("conjugating theta by the shift", "[phase]") {
  // e^dagger^alpha theta(N - alpha) e^alpha reads theta at N - alpha, giving
  // theta(N - 2 alpha); the opposite ordering removes the step entirely.
  const int c = 20;
  const FockSpace s = make_space({c});
  const auto e = phase_pair(s, 0);
  for (int alpha = 1; alpha <= 4; ++alpha) {
    const auto th = theta_operator(s, 0, alpha);
    CHECK(relation_residual(alpha_adjoint(s, 0, th, alpha), theta_operator(s, 0, 2 * alpha), 0)
              .residual == 0);
    CHECK(relation_residual(power(e.lower, alpha) * th * power(e.raise, alpha),
                            LinearOperator::identity(s), alpha)
              .residual == 0);
  }
}

TEST_CASE("alpha boson", "[phase]") {
  const FockSpace s = make_space({12});
  const AlphaBoson b = alpha_boson(s, 0, 2);
  CHECK_THAT(amp(b.triple.lower * ket(s, 5), 4), WithinAbs(std::sqrt(3.0), 1e-15));
  CHECK(b.kernel_dimension == 3);
  CHECK(relation_residual(commutator(b.triple.lower, b.triple.raise), theta_operator(s, 0, 2), 2)
            .residual == 0);
  CHECK_THROWS_AS(alpha_boson(s, 0, 11), argument_error);
}

TEST_CASE("oracle: alpha boson matrix entries", "[phase][oracle]") {
  for (int alpha = 0; alpha <= 4; ++alpha) {
    const std::vector<int> c{14};
    const FockSpace s = make_space(c);
    const auto dense = oracle::mode_map(c, 0, -1, [alpha](int n) {
      return n > alpha ? std::sqrt(double(n - alpha)) : 0.0;
    });
    CHECK(oracle::max_abs_diff(alpha_boson(s, 0, alpha).triple.lower, dense, c) < 1e-15);
  }
}

TEST_CASE("property: alpha boson invariants", "[phase][property]") {
  for (int c : {8, 16, 32}) {
    const FockSpace s = make_space({c});
    for (int alpha = 0; alpha <= std::min(5, c - 2); ++alpha) {
      const AlphaBoson b = alpha_boson(s, 0, alpha);
      CHECK(b.kernel_dimension == alpha + 1);
      CHECK(relation_residual(b.triple.raise, b.triple.lower.adjoint(), 0).residual == 0);
      for (int n = 0; n + alpha <= c - 1; ++n) {
        const auto v = b.triple.number * ket(s, n + alpha);
        CHECK_THAT(amp(v, n + alpha), WithinAbs(double(n), 1e-15 * (n + 1)));
        CHECK_THAT(static_cast<double>(v.norm()), WithinAbs(double(n), 1e-15 * (n + 1)));
      }
    }
  }
}

TEST_CASE("alpha phase pair defect is the projector onto |alpha>", "[phase]") {
  const FockSpace s = make_space({15});
  for (int alpha = 0; alpha <= 5; ++alpha) {
    const auto e = alpha_phase_pair(s, 0, alpha);
    CHECK(relation_residual(e.lower * e.raise - e.raise * e.lower, level_projector(s, 0, alpha), 1)
              .residual == 0);
  }
}
