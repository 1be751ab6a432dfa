#pragma once

#include <stdexcept>
#include <string>

namespace vsm {

// Base class for all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

// File content violates its format contract (header JSON, NIfTI, CSV).
class FormatError : public Error {
public:
  using Error::Error;
};

// Batch manifest failed to parse or validate.
class ManifestError : public FormatError {
public:
  using FormatError::FormatError;
};

// Volume contains no tumour voxels (no label 1 or 2).
class EmptyTumourError : public Error {
public:
  using Error::Error;
};

// Selector matched no voxel.
class EmptyRegionError : public Error {
public:
  using Error::Error;
};

class DimMismatchError : public Error {
public:
  using Error::Error;
};

class EmptyInputError : public Error {
public:
  using Error::Error;
};

// Fewer than 2 distinct interface points.
class DegenerateInterfaceError : public Error {
public:
  using Error::Error;
};

// Interface point covariance has equal eigenvalues; no principal direction.
class IsotropicInterfaceError : public Error {
public:
  using Error::Error;
};

// Pre-operative volume with an extrameatal region but no usable aux features.
class MissingFeaturesError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

class ConstantSeriesError : public Error {
public:
  using Error::Error;
};

class SliceOutOfRangeError : public Error {
public:
  using Error::Error;
};

} // namespace vsm
