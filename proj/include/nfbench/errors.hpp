#pragma once

#include <stdexcept>
#include <string>

namespace nfb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : Error {
    using Error::Error;
};

struct IngestError : Error {
    using Error::Error;
};

// Raised when a cleaning method would leave a class with zero rows.
struct EmptyResultError : Error {
    using Error::Error;
};

// Raised on a non-finite training loss.
struct TrainingError : Error {
    using Error::Error;
};

}  // namespace nfb
