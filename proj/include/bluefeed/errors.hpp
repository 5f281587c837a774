#pragma once

#include <stdexcept>
#include <string>

namespace bluefeed {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes (see tools/bluefeed_sim.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// No sensor carries any information about the parameter (every a_i g_i h_i is zero).
class AllSilent : public Error {
public:
    AllSilent() : Error("all sensors are silent; BLUE normalizer is zero") {}
};

class ZeroDelta : public Error {
public:
    using Error::Error;
};

class EmptyCell : public Error {
public:
    EmptyCell() : Error("quantization cell is empty") {}
};

class InsufficientTrainingData : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public IoError {
public:
    using IoError::IoError;
};

}  // namespace bluefeed
