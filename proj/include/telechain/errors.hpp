#pragma once

#include <stdexcept>
#include <string>

namespace telechain {

// Error vocabulary shared by the ledger, registries, scrubbing, and campaign
// validators. Validator rejections are recoverable (endorsement withheld);
// everything else signals misuse of the API or corrupted input.
enum class ErrorCode {
    // ledger / membership
    UnknownIdentity,
    StaleNonce,
    MismatchedReadWriteSets,
    BrokenChain,
    DuplicateIdentity,
    VerificationFailed,
    RegulatorDbUnavailable,
    RoleNotPermitted,
    // registries
    MalformedNumber,
    BadFormat,
    DuplicateHeader,
    LookalikeHeader,
    NotOwner,
    UnknownTelemarketer,
    NotDelegated,
    MalformedPlaceholders,
    UnknownCategory,
    WrongOperator,
    NoPendingRequest,
    OtpMismatch,
    OtpExpired,
    UnknownHeader,
    UnknownPrincipalEntity,
    MissingConsentClause,
    // scrubbing
    UnregisteredTemplate,
    BatchTooSmall,
    StaleIndex,
    GapDetected,
    DigestMismatch,
    BadSignature,
    TokenNotOnChain,
    // campaign
    TokenHeaderMismatch,
    TokenAlreadyConsumed,
    TemplateMismatch,
    OutsideWindow,
    MalformedSender,
    InsufficientEvidence,
    // harness
    ConfigInvalid,
    IoFailure,
    DivisionWindowEmpty,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::UnknownIdentity: return "UnknownIdentity";
        case ErrorCode::StaleNonce: return "StaleNonce";
        case ErrorCode::MismatchedReadWriteSets: return "MismatchedReadWriteSets";
        case ErrorCode::BrokenChain: return "BrokenChain";
        case ErrorCode::DuplicateIdentity: return "DuplicateIdentity";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
        case ErrorCode::RegulatorDbUnavailable: return "RegulatorDbUnavailable";
        case ErrorCode::RoleNotPermitted: return "RoleNotPermitted";
        case ErrorCode::MalformedNumber: return "MalformedNumber";
        case ErrorCode::BadFormat: return "BadFormat";
        case ErrorCode::DuplicateHeader: return "DuplicateHeader";
        case ErrorCode::LookalikeHeader: return "LookalikeHeader";
        case ErrorCode::NotOwner: return "NotOwner";
        case ErrorCode::UnknownTelemarketer: return "UnknownTelemarketer";
        case ErrorCode::NotDelegated: return "NotDelegated";
        case ErrorCode::MalformedPlaceholders: return "MalformedPlaceholders";
        case ErrorCode::UnknownCategory: return "UnknownCategory";
        case ErrorCode::WrongOperator: return "WrongOperator";
        case ErrorCode::NoPendingRequest: return "NoPendingRequest";
        case ErrorCode::OtpMismatch: return "OtpMismatch";
        case ErrorCode::OtpExpired: return "OtpExpired";
        case ErrorCode::UnknownHeader: return "UnknownHeader";
        case ErrorCode::UnknownPrincipalEntity: return "UnknownPrincipalEntity";
        case ErrorCode::MissingConsentClause: return "MissingConsentClause";
        case ErrorCode::UnregisteredTemplate: return "UnregisteredTemplate";
        case ErrorCode::BatchTooSmall: return "BatchTooSmall";
        case ErrorCode::StaleIndex: return "StaleIndex";
        case ErrorCode::GapDetected: return "GapDetected";
        case ErrorCode::DigestMismatch: return "DigestMismatch";
        case ErrorCode::BadSignature: return "BadSignature";
        case ErrorCode::TokenNotOnChain: return "TokenNotOnChain";
        case ErrorCode::TokenHeaderMismatch: return "TokenHeaderMismatch";
        case ErrorCode::TokenAlreadyConsumed: return "TokenAlreadyConsumed";
        case ErrorCode::TemplateMismatch: return "TemplateMismatch";
        case ErrorCode::OutsideWindow: return "OutsideWindow";
        case ErrorCode::MalformedSender: return "MalformedSender";
        case ErrorCode::InsufficientEvidence: return "InsufficientEvidence";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::DivisionWindowEmpty: return "DivisionWindowEmpty";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail = {})
        : std::runtime_error(std::string(error_code_name(code)) +
                             (detail.empty() ? "" : ": " + detail)),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// A business-rule rejection raised inside a transaction validator during
// endorsement. The endorsing peer withholds its endorsement and reports the
// reason; committed state is never touched.
class ValidatorRejected : public Error {
public:
    using Error::Error;
};

}  // namespace telechain
