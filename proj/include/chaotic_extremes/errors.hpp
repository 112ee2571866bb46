#ifndef CHAOTIC_EXTREMES_ERRORS_HPP
#define CHAOTIC_EXTREMES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chaotic_extremes {

// Input outside the phase space or probability range of a function.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed call arguments (zero lengths, unsorted grids, bad knobs).
class argument_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
class precondition_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A computation degenerated: zero variance, a unit quantile, an empty tail.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_argument(bool ok, const std::string& what) {
  if (!ok) throw argument_error(what);
}

inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw domain_error(what);
}

}  // namespace detail
}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_ERRORS_HPP
