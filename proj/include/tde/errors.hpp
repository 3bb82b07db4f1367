#pragma once

#include <stdexcept>

namespace tde {

// Inadmissible basis dimension for a family.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Malformed call input: wrong sizes, empty data, missing required argument.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operation not defined for the given object.
struct unsupported_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Invalid experiment configuration; the message names the offending key.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tde
