#pragma once

#include <stdexcept>
#include <string>

namespace codesign {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad schema, violated invariant, mismatched dimensions.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The finite element system could not be solved.
class FeaError : public Error {
public:
    using Error::Error;
};

} // namespace codesign
