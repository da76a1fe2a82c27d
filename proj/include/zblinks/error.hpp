#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zblinks {

enum class Errc {
    InvalidValue,
    MalformedLine,
    DuplicateLink,
    DuplicateId,
    UnknownPartner,
    UnknownZbl,
    PartnerExists,
    BadFilter,
    SyntaxError,
    AmbiguousDoi,
    EmptyTrainingSet,
    DegenerateSplit,
    NotFound,
    BadRequest,
    ReadOnly,
    Io,
    Format,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures are reported through this type; the code is what the
// API layer and the CLI map to statuses and exit codes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

class XFieldSyntaxError : public Error {
public:
    XFieldSyntaxError(std::size_t position, std::string expected);

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

}  // namespace zblinks
