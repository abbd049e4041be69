#pragma once

#include <stdexcept>
#include <string>

namespace qboson {

/// Malformed or out-of-range argument (bad mode index, negative margin, ...).
class argument_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested Fock space exceeds the configured dimension limit.
class size_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Numeric range guard tripped (q^{-2n} growth and similar).
class range_error : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// The truncated basis cannot represent the requested state to the guaranteed accuracy.
class truncation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncation tail is too heavy for the requested expectation accuracy.
class accuracy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal construction could not satisfy the relations it is built to satisfy.
class consistency_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid combination of verification-suite settings.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qboson
