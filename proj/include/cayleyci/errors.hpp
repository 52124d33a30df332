#ifndef CAYLEYCI_ERRORS_HPP
#define CAYLEYCI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cayleyci {

/// A feasibility gate or configured cap was exceeded. Deliberately distinct
/// from an empty result: a truncated scan is not a verdict.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string &what) : std::runtime_error(what) {}
};

/// File parse / IO failure.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace cayleyci

#endif
