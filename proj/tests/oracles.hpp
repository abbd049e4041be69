#pragma once

// Independent reference computations for the test suites. Everything here
// works on plain nested vectors built entry by entry from the number basis;
// nothing calls into the library's sparse algebra.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qboson/fock.hpp"

namespace oracle {

using cd = std::complex<double>;
using Dense = std::vector<std::vector<cd>>;

inline Dense zeros(std::size_t n) { return Dense(n, std::vector<cd>(n, 0.0)); }

inline Dense identity(std::size_t n) {
  Dense m = zeros(n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c = zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

inline Dense add(const Dense& a, const Dense& b, cd s = 1.0) {
  Dense c = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) c[i][j] += s * b[i][j];
  }
  return c;
}

/// Enumerates occupations with mode 0 varying slowest.
inline std::vector<std::vector<int>> basis(const std::vector<int>& cutoffs) {
  std::vector<std::vector<int>> out{{}};
  for (int c : cutoffs) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      for (int n = 0; n <= c; ++n) {
        auto v = prefix;
        v.push_back(n);
        next.push_back(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Matrix of the single-mode map |n> -> w(n) |n + shift> on `mode`, identity
/// elsewhere; targets outside [0, cutoff] are dropped.
inline Dense mode_map(const std::vector<int>& cutoffs, std::size_t mode, int shift,
                      const std::function<double(int)>& w) {
  const auto states = basis(cutoffs);
  Dense m = zeros(states.size());
  for (std::size_t col = 0; col < states.size(); ++col) {
    auto target = states[col];
    target[mode] += shift;
    if (target[mode] < 0 || target[mode] > cutoffs[mode]) continue;
    for (std::size_t row = 0; row < states.size(); ++row) {
      if (states[row] == target) m[row][col] += w(states[col][mode]);
    }
  }
  return m;
}

inline Dense lower(const std::vector<int>& cutoffs, std::size_t mode) {
  return mode_map(cutoffs, mode, -1, [](int n) { return std::sqrt(double(n)); });
}

inline Dense raise(const std::vector<int>& cutoffs, std::size_t mode) {
  return mode_map(cutoffs, mode, +1, [](int n) { return std::sqrt(double(n + 1)); });
}

inline Dense shift_down(const std::vector<int>& cutoffs, std::size_t mode) {
  return mode_map(cutoffs, mode, -1, [](int) { return 1.0; });
}

inline Dense shift_up(const std::vector<int>& cutoffs, std::size_t mode) {
  return mode_map(cutoffs, mode, +1, [](int) { return 1.0; });
}

inline Dense diag(const std::vector<int>& cutoffs,
                  const std::function<double(const std::vector<int>&)>& f) {
  const auto states = basis(cutoffs);
  Dense m = zeros(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) m[i][i] = f(states[i]);
  return m;
}

/// Largest entry magnitude of lhs - rhs on states with n_m <= c_m - margin.
inline double max_abs_diff_safe(const qboson::LinearOperator& op, const Dense& ref,
                                const std::vector<int>& cutoffs, int margin) {
  const auto states = basis(cutoffs);
  std::vector<bool> safe(states.size(), true);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t m = 0; m < cutoffs.size(); ++m) {
      if (states[i][m] > cutoffs[m] - margin) safe[i] = false;
    }
  }
  double worst = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (!safe[i] || !safe[j]) continue;
      const auto v = op.coeff(i, j);
      const cd got(static_cast<double>(v.real()), static_cast<double>(v.imag()));
      worst = std::max(worst, std::abs(got - ref[i][j]));
    }
  }
  return worst;
}

inline double max_abs_diff(const qboson::LinearOperator& op, const Dense& ref,
                           const std::vector<int>& cutoffs) {
  return max_abs_diff_safe(op, ref, cutoffs, 0);
}

/// Deterministic generator for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::vector<int> cutoffs(int max_modes, int max_cutoff) {
    std::vector<int> c(static_cast<std::size_t>(integer(1, max_modes)));
    for (int& x : c) x = integer(1, max_cutoff);
    return c;
  }

 private:
  std::mt19937_64 rng_;
};

/// Truncated geometric moments sum_n w(n) (1-x) x^n / sum_n (1-x) x^n, n <= c.
inline long double geometric_mean(long double x, int c, const std::function<long double(int)>& w) {
  long double num = 0, den = 0, p = 1;
  for (int n = 0; n <= c; ++n) {
    num += w(n) * p;
    den += p;
    p *= x;
  }
  return num / den;
}

}  // namespace oracle
