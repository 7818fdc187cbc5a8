#pragma once

#include <stdexcept>
#include <string>

namespace mafe {

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not conform (matrix/vector lengths, gadget widths).
class DimensionError : public Error
{
public:
  using Error::Error;
};

// Operands live over different moduli, or a modulus is unsupported.
class ModulusError : public Error
{
public:
  using Error::Error;
};

// A parameter set or input violates a named constraint.
class ValidationError : public Error
{
public:
  using Error::Error;
};

// Decryption was attempted with a share set that does not cover the ciphertext policy.
class PolicyError : public Error
{
public:
  using Error::Error;
};

// Serialized bytes are malformed, truncated or belong to other parameters.
class FormatError : public Error
{
public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace mafe
