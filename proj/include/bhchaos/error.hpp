#ifndef BHCHAOS_ERROR_HPP
#define BHCHAOS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bhchaos {

// Exception hierarchy. The CLI maps each family onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model parameters, sizes, selections or windows (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Eigensolver failures, degenerate fits, empty windows (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Spectrum cache problems (exit code 4).
class CacheError : public Error {
 public:
  using Error::Error;
};

class CacheVersionError : public CacheError {
 public:
  using CacheError::CacheError;
};

class CacheChecksumError : public CacheError {
 public:
  using CacheError::CacheError;
};

// Manifest exists but describes a different model or block layout.
class CacheMismatchError : public CacheError {
 public:
  using CacheError::CacheError;
};

}  // namespace bhchaos

#endif  // BHCHAOS_ERROR_HPP
