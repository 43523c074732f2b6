#pragma once

#include <stdexcept>
#include <string>

namespace hamred {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error { using Error::Error; };
class SymmetryError : public Error { using Error::Error; };
class RankError : public Error { using Error::Error; };
class DefinitenessError : public Error { using Error::Error; };

/// Newton iteration did not reach the requested residual.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

class StiffnessError : public Error { using Error::Error; };
class QuadratureError : public Error { using Error::Error; };

/// The pivot minor of the constraint Jacobian degenerated.
class ChartError : public Error { using Error::Error; };

/// C = G M^-1 G^T (or the resolution matrix) is singular.
class ReductionError : public Error { using Error::Error; };

/// The matrix of constraint brackets is not invertible.
class SecondClassError : public Error { using Error::Error; };

class VariantError : public Error { using Error::Error; };

/// Lie series coefficients indicate divergence at the requested step.
class RadiusError : public Error { using Error::Error; };

class BranchError : public Error { using Error::Error; };
class CausticError : public Error { using Error::Error; };
class PlanarityError : public Error { using Error::Error; };

/// Malformed user input (configuration files, expressions, CLI flags).
class ConfigError : public Error { using Error::Error; };

}  // namespace hamred
