#pragma once

#include <stdexcept>
#include <string>

namespace aqs {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dimension mismatch between two values (qubit counts, key lengths, ...).
struct SizeError : Error {
    using Error::Error;
};

/// A qubit index outside 1..num_qubits, or a degenerate index pair.
struct IndexError : Error {
    using Error::Error;
};

/// A single-qubit amplitude pair that is not normalized.
struct NormalizationError : Error {
    using Error::Error;
};

/// A key sequence that is not a permutation of 1..n.
struct KeyError : Error {
    using Error::Error;
};

/// A collapse or qubit removal that the current state cannot support.
struct StateError : Error {
    using Error::Error;
};

/// Failure to read or write an external file.
struct IoError : Error {
    using Error::Error;
};

}  // namespace aqs
