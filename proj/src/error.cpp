// Copyright (c) the meyerslab authors.
// SPDX-License-Identifier: Apache-2.0

#include "error.hpp"

namespace meyerslab {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::undefined_at_origin: return "undefined-at-origin";
        case ErrorCode::degenerate_element: return "degenerate-element";
        case ErrorCode::coefficient_undefined: return "coefficient-undefined";
        case ErrorCode::evaluation_failure: return "evaluation-failure";
        case ErrorCode::no_convergence: return "no-convergence";
        case ErrorCode::breakdown: return "breakdown";
        case ErrorCode::empty_region: return "empty-region";
        case ErrorCode::degenerate_fit: return "degenerate-fit";
        case ErrorCode::region_too_small: return "region-too-small";
        case ErrorCode::zero_rhs: return "zero-rhs";
        case ErrorCode::io_failure: return "io-failure";
        case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

} // namespace meyerslab
