#pragma once

#include <stdexcept>
#include <string>

namespace fedcedar {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Two parameter vectors (or a vector and a model) disagree on layout.
class ManifestMismatch : public Error {
public:
    using Error::Error;
};

class ArchitectureMismatch : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Cosine similarity requested for a vector whose norm is effectively zero.
class DegenerateVector : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

// The membership ledger was not recorded for the round preceding a distribute call.
class StaleLedger : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

enum class ConfigErrorKind { parse, validation, unknown_key, io };

class ConfigError : public Error {
public:
    ConfigError(ConfigErrorKind kind, std::string field, const std::string& what)
        : Error(what), kind_(kind), field_(std::move(field)) {}
    ConfigErrorKind kind() const { return kind_; }
    // Dotted path of the offending key, empty for whole-document errors.
    const std::string& field() const { return field_; }

private:
    ConfigErrorKind kind_;
    std::string field_;
};

} // namespace fedcedar
