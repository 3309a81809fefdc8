#pragma once

#include <stdexcept>
#include <string>

namespace fr3sim {

/// Base of every error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class CatalogMiss : public Error {
public:
    explicit CatalogMiss(const std::string& name)
        : Error("unknown radio type '" + name + "'") {}
};

/// Rejection sampling ran out of attempts.
class Exhaustion : public Error {
public:
    using Error::Error;
};

class ModelDomain : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class NoCoverage : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class FilesystemError : public Error {
public:
    using Error::Error;
};

}  // namespace fr3sim
