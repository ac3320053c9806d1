#pragma once

#include <stdexcept>
#include <string>

namespace aloha {

// Base of everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input/configuration problems. The CLI maps these to exit code 2,
// everything else to exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

struct InvalidSpec : ValidationError {
    using ValidationError::ValidationError;
};

struct InvalidPmf : ValidationError {
    using ValidationError::ValidationError;
};

// A law with P(X = 1) = 0 breaks irreducibility of the queue chain and is
// rejected when assembling a network. user_index is -1 when unknown.
struct ZeroProbOfOne : ValidationError {
    ZeroProbOfOne(const std::string& msg, int user_index = -1)
        : ValidationError(msg), user(user_index) {}
    int user;
};

struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

struct ZeroOfferedRate : ValidationError {
    using ValidationError::ValidationError;
};

struct EmptyInput : ValidationError {
    using ValidationError::ValidationError;
};

struct NotSinglePacket : ValidationError {
    using ValidationError::ValidationError;
};

struct InitIsOrigin : ValidationError {
    using ValidationError::ValidationError;
};

struct StateSpaceTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

struct GridTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

struct EmptyGrid : ValidationError {
    using ValidationError::ValidationError;
};

struct SchemaError : ValidationError {
    SchemaError(const std::string& json_path, const std::string& what)
        : ValidationError(json_path + ": " + what), path(json_path) {}
    std::string path;
};

// Linear solve failed (disconnected truncation, numerical breakdown).
struct SingularSystem : Error {
    using Error::Error;
};

}  // namespace aloha
