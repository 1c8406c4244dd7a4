// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tsnip {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class invalid_argument : public error {
 public:
  using error::error;
};

/// Malformed or unreadable input data.
class input_error : public error {
 public:
  using error::error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw invalid_argument(what);
}

}  // namespace detail
}  // namespace tsnip
