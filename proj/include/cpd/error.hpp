#pragma once

#include <stdexcept>
#include <string>

namespace cpd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied data or parameters that violate a documented precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The autocovariance sequence handed to a Gaussian sampler is not
/// (numerically) positive definite.
class CovarianceNotPD : public Error {
public:
    using Error::Error;
};

}  // namespace cpd
