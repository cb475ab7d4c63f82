// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace meyerslab {

enum class ErrorCode {
    invalid_argument,
    undefined_at_origin,
    degenerate_element,
    coefficient_undefined,
    evaluation_failure,
    no_convergence,
    breakdown,
    empty_region,
    degenerate_fit,
    region_too_small,
    zero_rhs,
    io_failure,
    internal,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying one of the library error codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace meyerslab
