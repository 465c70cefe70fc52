#pragma once

#include <stdexcept>
#include <string>

namespace smartskin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A continuous position or textual pattern that cannot be mapped onto a legal pattern.
class EncodingError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Precondition of an operation violated by the caller (e.g. oracle on a coupled plant).
class ContractError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Base for everything that goes wrong while talking to a plant.
class PlantError : public Error {
 public:
  using Error::Error;
};

class PlantTimeout : public PlantError {
 public:
  using PlantError::PlantError;
};

class MalformedResponse : public PlantError {
 public:
  using PlantError::PlantError;
};

class DimensionMismatch : public PlantError {
 public:
  using PlantError::PlantError;
};

/// The plant answered with an `ERR` record.
class PlantFailure : public PlantError {
 public:
  using PlantError::PlantError;
};

class ConnectionError : public PlantError {
 public:
  using PlantError::PlantError;
};

namespace detail {

/// Rethrows the in-flight exception with a context prefix, keeping the plant error subtype.
[[noreturn]] inline void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const PlantTimeout& e) {
    throw PlantTimeout(context + e.what());
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(context + e.what());
  } catch (const MalformedResponse& e) {
    throw MalformedResponse(context + e.what());
  } catch (const PlantFailure& e) {
    throw PlantFailure(context + e.what());
  } catch (const ConnectionError& e) {
    throw ConnectionError(context + e.what());
  } catch (const PlantError& e) {
    throw PlantError(context + e.what());
  }
}

}  // namespace detail

}  // namespace smartskin
