#include "privbot/error.hpp"

namespace privbot {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::DuplicateTimestamp: return "DuplicateTimestamp";
    case Errc::NonUniformSpacing: return "NonUniformSpacing";
    case Errc::NotAMultiple: return "NotAMultiple";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::EmptyList: return "EmptyList";
    case Errc::UnknownTimestamp: return "UnknownTimestamp";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::WindowOutOfRange: return "WindowOutOfRange";
    case Errc::WindowMismatch: return "WindowMismatch";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::EmptyTestSet: return "EmptyTestSet";
    case Errc::ConstraintUnsatisfied: return "ConstraintUnsatisfied";
    case Errc::InvalidWitness: return "InvalidWitness";
    case Errc::NoData: return "NoData";
    case Errc::DuplicateUser: return "DuplicateUser";
    case Errc::ZeroAmount: return "ZeroAmount";
    case Errc::EmptyPool: return "EmptyPool";
    case Errc::UnknownPhase: return "UnknownPhase";
    case Errc::VerifierAlreadyDeployed: return "VerifierAlreadyDeployed";
    case Errc::VerifierNotDeployed: return "VerifierNotDeployed";
    case Errc::InsufficientBalance: return "InsufficientBalance";
    case Errc::InsufficientLiquidity: return "InsufficientLiquidity";
    case Errc::UnknownAsset: return "UnknownAsset";
    case Errc::FeedExhausted: return "FeedExhausted";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::BadConfig: return "BadConfig";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& message, std::optional<std::int64_t> detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code), detail_(detail) {}

} // namespace privbot
