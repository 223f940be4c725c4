#ifndef FRV_ERRORS_HPP
#define FRV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace frv {

/// Iterative method failed to converge within its iteration cap.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A factorization required simple roots but found a cluster.
struct DegenerateRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A root sits on the unit circle; the process is not weakly stationary.
struct BoundaryRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation requested exactly at a branch point of a square-root cut.
struct BranchPointError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Evaluation requested exactly at a prefactor pole.
struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Process parameters violate weak stationarity.
struct StationarityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Density solver could not locate or track the physical branch.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace frv

#endif
