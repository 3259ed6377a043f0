#pragma once

#include <stdexcept>
#include <string>

namespace fquant {

// Base of all library errors. The three direct subclasses partition
// failures by how a caller (notably the CLI) should react: bad inputs or
// configuration, file problems, and data-dependent estimation failures.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class EstimationError : public Error {
public:
  using Error::Error;
};

// -- configuration / input validation ---------------------------------------

class CurveTooShort : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class NonUniformGrid : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class GridMismatch : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class EmptyDataset : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class InsufficientData : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class LengthMismatch : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class NonpositiveTruth : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class EmptyLoad : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class CalibrationFailed : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// -- data-dependent estimation failures --------------------------------------

// No training curve lies within the curve bandwidth of the query.
class EmptyNeighborhood : public EstimationError {
public:
  using EstimationError::EstimationError;
};

// The empirical small-ball fraction at the bandwidth is zero.
class EmptyBall : public EstimationError {
public:
  using EstimationError::EstimationError;
};

// Conditional density at the estimated quantile fell below the floor, so a
// confidence interval would be meaningless.
class DegenerateDensity : public EstimationError {
public:
  using EstimationError::EstimationError;
};

// The plug-in variance term alpha * (1/Gbar - alpha) was not positive.
class NonpositiveVariance : public EstimationError {
public:
  using EstimationError::EstimationError;
};

// The smoothed CDF never reached the requested order on its bracket, so the
// quantile is only a right-endpoint bound; intervals cannot be formed.
class SaturatedQuantile : public EstimationError {
public:
  using EstimationError::EstimationError;
};

// Every cross-validation fold was unusable (empty neighborhoods or all
// criterion weights zero).
class AllFoldsEmpty : public EstimationError {
public:
  using EstimationError::EstimationError;
};

}  // namespace fquant
