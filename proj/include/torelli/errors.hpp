#pragma once

#include <stdexcept>
#include <string>

namespace torelli {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFullDimensional : public Error {
 public:
  using Error::Error;
};

class SupportOutsidePolytope : public Error {
 public:
  using Error::Error;
};

class NewtonPolytopeMismatch : public Error {
 public:
  using Error::Error;
};

class NoIndependentFacetChoice : public Error {
 public:
  using Error::Error;
};

/// The interior lattice points of the polytope lie in an affine hyperplane,
/// so the enumeration formula for the period-map kernel does not apply.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// U_{f,k} and J^k restricted to interior points disagree. Carries a witness.
class PropositionViolation : public Error {
 public:
  using Error::Error;
};

class ClassificationInconsistency : public Error {
 public:
  using Error::Error;
};

class FormNotEmpty : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace torelli
