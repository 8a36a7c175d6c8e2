#pragma once

#include <stdexcept>
#include <string>

namespace taubnut {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A radius or phase point outside the open radial domain of the manifold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is not defined for this parameter sector.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Argument hit a pole of Γ or of a hypergeometric parameter.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Operation requires a bound phase point (H < 0).
class PositiveEnergy : public Error {
 public:
  using Error::Error;
};

/// Closed-form spectrum requested outside k > 0, η ≥ 0.
class SectorError : public Error {
 public:
  using Error::Error;
};

/// Coulomb reference quantity requested with k ≤ 0.
class NonAttractive : public Error {
 public:
  using Error::Error;
};

/// Quantum effective potential without a local minimum.
class NoMinimum : public Error {
 public:
  enum class Kind {
    no_local_minimum,    ///< potential decreases monotonically away from the wall
    unbounded_at_origin  ///< minimum sits at r = 0 with value −∞
  };
  NoMinimum(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Spectrum below zero is empty (repulsive sectors).
class NoBoundStates : public Error {
 public:
  using Error::Error;
};

/// Root search bracket did not contain the requested number of roots.
class NoRootInBracket : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to reach its tolerance.
class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

/// An iterative solve did not converge.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters for grids, solvers or configuration.
class BadParams : public Error {
 public:
  using Error::Error;
};

}  // namespace taubnut
