#include "zblinks/error.hpp"

namespace zblinks {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidValue: return "InvalidValue";
        case Errc::MalformedLine: return "MalformedLine";
        case Errc::DuplicateLink: return "DuplicateLink";
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::UnknownPartner: return "UnknownPartner";
        case Errc::UnknownZbl: return "UnknownZbl";
        case Errc::PartnerExists: return "PartnerExists";
        case Errc::BadFilter: return "BadFilter";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::AmbiguousDoi: return "AmbiguousDoi";
        case Errc::EmptyTrainingSet: return "EmptyTrainingSet";
        case Errc::DegenerateSplit: return "DegenerateSplit";
        case Errc::NotFound: return "NotFound";
        case Errc::BadRequest: return "BadRequest";
        case Errc::ReadOnly: return "ReadOnly";
        case Errc::Io: return "Io";
        case Errc::Format: return "Format";
    }
    return "Unknown";
}

XFieldSyntaxError::XFieldSyntaxError(std::size_t position, std::string expected)
    : Error(Errc::SyntaxError,
            "x-field syntax error at position " + std::to_string(position) + ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

}  // namespace zblinks
