#pragma once

#include <stdexcept>
#include <string>

namespace slimrank {

/// Base class for all slimrank runtime failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// matrix-core
struct NotPositiveDefinite : Error {
    using Error::Error;
};
struct ConvergenceFailure : Error {
    using Error::Error;
};

// prox-ops
struct MaxInnerIterationsExceeded : Error {
    using Error::Error;
};

// alm-solver
struct NonFinite : Error {
    using Error::Error;
};

// recommender-eval
struct MissingList : Error {
    using Error::Error;
};

// data-io
struct ParseError : Error {
    ParseError(const std::string& path, long line, const std::string& reason)
        : Error(path + ":" + std::to_string(line) + ": " + reason), line(line) {}
    long line;
};
struct DuplicateEntry : Error {
    using Error::Error;
};
struct EmptyDataset : Error {
    using Error::Error;
};

}  // namespace slimrank
