#ifndef QFACE_ERRORS_HPP
#define QFACE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qface {

/// Problems with input data: missing files, malformed image/manifest bytes,
/// inconsistent dimensions, empty splits. CLI maps these to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failures: rank-deficient truncation, non-Hermitian input beyond
/// tolerance. CLI maps these to exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qface

#endif  // QFACE_ERRORS_HPP
