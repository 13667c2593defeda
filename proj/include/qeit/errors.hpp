#pragma once

#include <stdexcept>
#include <string>

namespace qeit {

// Parameters outside the physical domain of the model (negative rates,
// zero-photon probes, singular denominators).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A finite basis or series truncation could not reach its tolerance:
// coherent-state tail mass too large for the basis, or an l-sum that did not
// converge before the cap.
class TruncationError : public std::runtime_error {
public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qeit
