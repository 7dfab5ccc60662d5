#pragma once

#include <stdexcept>
#include <string>

namespace slime {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (corpus files, dictionaries,
// attribution interchange). The CLI maps these to exit code 2.
class data_error : public error {
public:
    using error::error;
};

// Bad arguments, config schema violations, stages run out of order.
// The CLI maps these to exit code 1.
class usage_error : public error {
public:
    using error::error;
};

}  // namespace slime
