#ifndef FCREC_ERRORS_HPP
#define FCREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fcrec {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (file parsing, duplicate entries).
class IngestError : public Error {
public:
    using Error::Error;
};

/// A referenced user/item/cluster does not exist.
class LookupError : public Error {
public:
    using Error::Error;
};

/// A configuration value is out of its valid range.
class ParamError : public Error {
public:
    using Error::Error;
};

/// Evaluation inputs violate the harness contract (e.g. mismatched item sets).
class ProtocolError : public Error {
public:
    using Error::Error;
};

} // namespace fcrec

#endif // FCREC_ERRORS_HPP
