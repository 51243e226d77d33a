#pragma once

#include <stdexcept>
#include <string>

namespace bkf {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition or invariant.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// File or stream operation failed; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A linear-algebra step lost positive definiteness or produced non-finite values.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The design matrix does not have full column rank.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Fewer draws than the posterior summary routines require.
class TooFewDraws : public Error {
 public:
  using Error::Error;
};

// --- response parsing ---

class ParseError : public Error {
 public:
  using Error::Error;
};

class NoJsonFound : public ParseError {
 public:
  NoJsonFound() : ParseError("no JSON object found in response text") {}
};

class MissingField : public ParseError {
 public:
  explicit MissingField(const std::string& name)
      : ParseError("missing field: " + name), field_(name) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class NonNumericField : public ParseError {
 public:
  explicit NonNumericField(const std::string& name)
      : ParseError("non-numeric field: " + name), field_(name) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// --- live chat client ---

class ClientError : public Error {
 public:
  using Error::Error;
};

class AuthError : public ClientError {
 public:
  using ClientError::ClientError;
};

class TimeoutError : public ClientError {
 public:
  using ClientError::ClientError;
};

class RateLimited : public ClientError {
 public:
  using ClientError::ClientError;
};

class MalformedProviderResponse : public ClientError {
 public:
  using ClientError::ClientError;
};

/// Non-retryable or retry-exhausted provider failure (unexpected HTTP status).
class ProviderError : public ClientError {
 public:
  using ClientError::ClientError;
};

}  // namespace bkf
