#ifndef ERQA_ERROR_HPP
#define ERQA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace erqa {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// PNG decoding failed or the file uses an unsupported bit depth / color type.
class DecodeError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch, out-of-bounds region, frame too small for an operation.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// An operation was called with arguments violating its contract
/// (wrong channel count, invalid parameter combination, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Bradley-Terry fitting failed (disconnected graph, no convergence).
class FittingError : public Error {
public:
    using Error::Error;
};

/// Correlation is undefined for the given input (constant vector, too short).
class CorrelationError : public Error {
public:
    using Error::Error;
};

/// Item sets of metric scores and subjective scores do not line up.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Run manifest is invalid or the frame sets of GT and distorted dirs differ.
class ManifestError : public Error {
public:
    using Error::Error;
};

} // namespace erqa

#endif // ERQA_ERROR_HPP
