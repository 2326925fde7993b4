// Exception types shared across the pendulum_vib modules
#pragma once

#include <stdexcept>
#include <string>

namespace pendulum_vib {

/// Hamiltonian or potential evaluated on the vertical axis (sin φ = 0) with a
/// nonzero azimuthal momentum.
class SingularConfigurationError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Argument outside the documented domain of an operation.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The excitation violates the α-independence conditions of the averaged
/// Hamiltonian.
class SymmetryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Integration produced a non-finite state.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string &what, double time)
        : std::runtime_error(what), time_(time) {}

    /// Time of the last finite state before blow-up.
    double time() const noexcept { return time_; }

  private:
    double time_;
};

/// The equilibrium finder returned a count the theory forbids.
class InconsistentCountError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace pendulum_vib
