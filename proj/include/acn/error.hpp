// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace acn {

enum class ErrorCode {
    InvalidArgument,
    AllZeroWeights,
    WeightNormExceedsVmax,
    DimensionMismatch,
    TooLargeForExhaustive,
    NotUnitQuantized,
    ParseError,
    SchemaVersionError,
    SchemaMismatch,
    InvariantViolation,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Process exit status the CLI uses for each error class.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace acn
