#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace osa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a structural requirement (non-geometric lattice,
/// non-functorial presheaf, inconsistent cohomology data, ...).
/// The message carries the failure certificate.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A construction would exceed the configured element cap.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// Outcome of a structural check; the certificate names what failed.
struct Verdict {
  bool ok = true;
  std::string certificate;

  explicit operator bool() const { return ok; }
  static Verdict failure(std::string why) { return {false, std::move(why)}; }
};

/// Default cap on the number of poset elements any builder may produce.
inline constexpr std::size_t kDefaultMaxElements = 50000;

}  // namespace osa
